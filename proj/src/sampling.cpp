#include "sphmesh/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {

struct CellDraw {
    std::vector<std::size_t> cells;
    std::vector<double> cdf; // cumulative weights, unnormalized
};

CellDraw build_cell_cdf(const FeatureTagMap& tags, const FeatureBudget& budget, int feature,
                        const LevelSetGrid& grid, bool by_mass) {
    CellDraw d;
    double cell_vol =
        grid.spacing().x * grid.spacing().y * (grid.dim() == 3 ? grid.spacing().z : 1.0);
    double acc = 0.0;
    for (std::size_t c = 0; c < tags.cell_count(); ++c) {
        if (tags.cell_feature[c] != feature) continue;
        CellType t = tags.cell_type[c];
        if (t != CellType::Positive && t != CellType::Surface) continue;
        double w = by_mass ? budget.cell_mass[c] : cell_vol;
        if (w <= 0.0) continue;
        acc += w;
        d.cells.push_back(c);
        d.cdf.push_back(acc);
    }
    return d;
}

std::size_t draw_cell(const CellDraw& d, RngStream& rng) {
    double u = rng.uniform() * d.cdf.back();
    auto it = std::lower_bound(d.cdf.begin(), d.cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - d.cdf.begin());
    return d.cells[std::min(idx, d.cells.size() - 1)];
}

Vec3 point_in_cell(const FeatureTagMap& tags, const LevelSetGrid& grid, std::size_t lin,
                   RngStream& rng) {
    auto cd = tags.cell_dims;
    int i = static_cast<int>(lin % cd[0]);
    int j = static_cast<int>((lin / cd[0]) % cd[1]);
    int k = static_cast<int>(lin / (static_cast<std::size_t>(cd[0]) * cd[1]));
    Vec3 lo = grid.cell_lo(i, j, k);
    Vec3 p{lo.x + rng.uniform() * grid.spacing().x, lo.y + rng.uniform() * grid.spacing().y, 0.0};
    if (grid.dim() == 3) p.z = lo.z + rng.uniform() * grid.spacing().z;
    return p;
}

// Conservative estimate of the density maximum inside a cell: corners plus
// center with a small safety factor.
double cell_density_max(const LevelSetGrid& grid, const FeatureTagMap& tags, std::size_t lin,
                        const SizingField& sizing, int density_dim) {
    auto cd = tags.cell_dims;
    int i = static_cast<int>(lin % cd[0]);
    int j = static_cast<int>((lin / cd[0]) % cd[1]);
    int k = static_cast<int>(lin / (static_cast<std::size_t>(cd[0]) * cd[1]));
    double m = sizing.eval_density(grid.cell_center(i, j, k), density_dim);
    int kmax = grid.dim() == 3 ? 1 : 0;
    for (int dk = 0; dk <= kmax; ++dk)
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di)
                m = std::max(m, sizing.eval_density(grid.node_position(i + di, j + dj, k + dk),
                                                    density_dim));
    return 1.02 * m;
}

} // namespace

SampledFeature sample_feature_particles(int feature, long long count, const FeatureTagMap& tags,
                                        const FeatureBudget& budget, const LevelSetGrid& grid,
                                        const std::vector<FeatureCurve>& curves,
                                        const std::vector<SingularityPoint>& singularities,
                                        const SizingField& sizing, RngStream& rng,
                                        bool density_proportional) {
    if (count < 1) throw Error("sample_feature_particles: count must be >= 1");
    SampledFeature out;
    FeatureType ftype = tags.index_table[feature].type;

    if (ftype == FeatureType::Singularity) {
        for (const auto& s : singularities)
            if (s.id == feature) {
                out.positions.assign(1, s.position);
                return out;
            }
        throw Error("sample_feature_particles: singularity feature without declared point");
    }

    if (ftype == FeatureType::Curve) {
        const FeatureCurve* curve = nullptr;
        for (const auto& c : curves)
            if (c.id() == feature) curve = &c;
        if (!curve) throw Error("sample_feature_particles: curve feature without declared curve");
        // Cumulative mass along sub-segments, then inverse transform.
        std::vector<double> cum{0.0}, arcs{0.0};
        int ns = curve->segment_count();
        for (int s = 0; s < ns; ++s) {
            const Vec3& a = curve->points()[s];
            const Vec3& b = curve->points()[(s + 1) % curve->points().size()];
            double len = norm(b - a);
            double h_mid = sizing.eval_size((a + b) * 0.5);
            int pieces = std::max(1, static_cast<int>(std::ceil(len / (0.25 * h_mid))));
            for (int q = 0; q < pieces; ++q) {
                double piece = len / pieces;
                Vec3 m = a + (b - a) * ((q + 0.5) / pieces);
                double w = density_proportional ? piece * sizing.eval_density(m, 1) : piece;
                cum.push_back(cum.back() + w);
                arcs.push_back(arcs.back() + piece);
            }
        }
        for (long long n = 0; n < count; ++n) {
            double u = rng.uniform() * cum.back();
            auto it = std::upper_bound(cum.begin(), cum.end(), u);
            std::size_t idx = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
            double t = (u - cum[idx - 1]) / std::max(cum[idx] - cum[idx - 1], 1e-300);
            double arc = arcs[idx - 1] + t * (arcs[idx] - arcs[idx - 1]);
            out.positions.push_back(curve->point_at_arc(arc));
            out.arcs.push_back(curve->wrap_arc(arc));
        }
        return out;
    }

    bool is_volume = ftype == FeatureType::Volume;
    int density_dim = is_volume ? grid.dim() : grid.dim() - 1;
    CellDraw cdf = build_cell_cdf(tags, budget, feature, grid, density_proportional);
    if (cdf.cells.empty())
        throw Error("sample_feature_particles: feature owns no sampleable cells");

    long long consecutive_rejects = 0;
    for (long long n = 0; n < count;) {
        std::size_t cell = draw_cell(cdf, rng);
        Vec3 p = point_in_cell(tags, grid, cell, rng);
        if (density_proportional) {
            double rho_max = cell_density_max(grid, tags, cell, sizing, density_dim);
            double accept = sizing.eval_density(p, density_dim) / rho_max;
            if (rng.uniform() >= accept) {
                if (++consecutive_rejects > 1000000)
                    throw Error("sample_feature_particles: pathological sizing, acceptance "
                                "rate below 1e-4 over 1e6 trials");
                continue;
            }
        }
        if (is_volume) {
            if (grid.eval_phi(p) <= 0.0) {
                ++consecutive_rejects;
                continue;
            }
        } else {
            p = grid.project_to_zero(p);
        }
        consecutive_rejects = 0;
        out.positions.push_back(p);
        ++n;
    }
    return out;
}

void sample_all_features(ParticleSystem& sys, const FeatureTagMap& tags,
                         const FeatureBudget& budget, const LevelSetGrid& grid,
                         const std::vector<FeatureCurve>& curves,
                         const std::vector<SingularityPoint>& singularities,
                         const SizingField& sizing, std::uint64_t master_seed,
                         bool density_proportional) {
    for (int f = 0; f < tags.feature_count(); ++f) {
        RngStream rng = RngStream::for_substream(master_seed, static_cast<std::uint64_t>(f));
        SampledFeature sf =
            sample_feature_particles(f, budget.count[f], tags, budget, grid, curves,
                                     singularities, sizing, rng, density_proportional);
        FeatureType ftype = tags.index_table[f].type;
        std::size_t base = sys.size();
        sys.resize(base + sf.positions.size());
        for (std::size_t n = 0; n < sf.positions.size(); ++n) {
            std::size_t i = base + n;
            sys.pos[i] = sf.positions[n];
            sys.type[i] = ftype;
            sys.feature[i] = f;
            sys.h[i] = sizing.eval_size(sf.positions[n]);
            if (ftype == FeatureType::Curve) {
                sys.curve_id[i] = f;
                sys.arc[i] = sf.arcs[n];
            }
        }
    }
}

} // namespace sphmesh
