#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sphmesh/config.hpp"
#include "sphmesh/mesh_io.hpp"
#include "sphmesh/pipeline.hpp"
#include "sphmesh/quality.hpp"
#include "sphmesh/tags.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    sphmesh::RunConfig cfg = sphmesh::parse_config(config_path);
    sphmesh::Pipeline pipeline(cfg);
    sphmesh::RunResult res = pipeline.run();
    if (!res.message.empty()) std::cerr << res.message << "\n";
    std::cout << "steps: " << res.global_steps;
    if (res.phase_one_steps >= 0) std::cout << "  phase-one steps: " << res.phase_one_steps;
    std::cout << "  repairs: " << res.repair_events << "\n";
    if (res.quality_valid) std::cout << sphmesh::quality_summary(res.quality);
    return res.exit_code;
}

int cmd_quality(const std::string& mesh_path, const std::string& csv_out) {
    sphmesh::ImportedMesh m = sphmesh::read_mesh(mesh_path);
    bool any = false;
    if (!m.triangles.empty()) {
        sphmesh::TriMesh tm{m.vertices, m.triangles};
        auto rep = sphmesh::quality_report(tm);
        std::cout << sphmesh::quality_summary(rep);
        if (!csv_out.empty()) sphmesh::write_quality_csv(rep, csv_out);
        any = true;
    }
    if (!m.tets.empty()) {
        auto rep = sphmesh::quality_report_tets(m.vertices, m.tets);
        std::cout << sphmesh::quality_summary(rep);
        if (!csv_out.empty())
            sphmesh::write_quality_csv(rep, m.triangles.empty()
                                                ? csv_out
                                                : csv_out + ".tets.csv");
        any = true;
    }
    if (!any) {
        std::cerr << "no triangles or tetrahedra in " << mesh_path << "\n";
        return 1;
    }
    return 0;
}

int cmd_tags(const std::string& config_path, const std::string& out) {
    sphmesh::RunConfig cfg = sphmesh::parse_config(config_path);
    sphmesh::Pipeline pipeline(cfg);
    // Build only the geometry stage, then export the tag map.
    pipeline.setup();
    std::string path = out.empty() ? cfg.output_dir + "/tags.vtk" : out;
    sphmesh::write_tags_vtk(pipeline.tags(), pipeline.grid(), path);
    std::cout << "wrote " << path << " (" << pipeline.tags().feature_count() << " features)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPH-based mesh-vertex relaxation engine"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "execute a relaxation run from a config file");
    run->add_option("config", run_config, "flat key/value config file")->required();

    std::string quality_mesh, quality_csv;
    auto* quality = app.add_subcommand("quality", "report mesh quality of a VTK/OBJ file");
    quality->add_option("mesh", quality_mesh, "mesh file (.vtk legacy ASCII or .obj)")->required();
    quality->add_option("--csv", quality_csv, "also write the report as CSV");

    std::string tags_config, tags_out;
    auto* tags = app.add_subcommand("tags", "emit the feature tag map as VTK image data");
    tags->add_option("config", tags_config, "flat key/value config file")->required();
    tags->add_option("--out", tags_out, "output path (default <output_dir>/tags.vtk)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config);
        if (quality->parsed()) return cmd_quality(quality_mesh, quality_csv);
        if (tags->parsed()) return cmd_tags(tags_config, tags_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
