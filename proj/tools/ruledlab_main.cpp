#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ruledlab/errors.hpp"
#include "ruledlab/mesh.hpp"
#include "ruledlab/scene.hpp"
#include "ruledlab/verify.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw ruledlab::Error("cannot write output file '" + out_path + "'");
    out << text;
}

std::string obj_text(const ruledlab::mesh::TriMesh& m) {
    std::ostringstream ss;
    ruledlab::mesh::write_obj(m, ss);
    return ss.str();
}

std::string obj_text(const ruledlab::mesh::Polyline& p) {
    std::ostringstream ss;
    ruledlab::mesh::write_obj(p, ss);
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ruled surface reconstruction and Laplace normal image toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, check_set = "auto", target = "surface";

    CLI::App* eval = app.add_subcommand("eval", "evaluate the surface and fields over the grid");
    eval->add_option("--config", config_path, "config file or builtin scene name")->required();
    eval->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* classify =
        app.add_subcommand("classify", "classify the Laplace normal image");
    classify->add_option("--config", config_path, "config file or builtin scene name")
        ->required();
    classify->add_option("--out", out_path, "write the image curve as CSV to this path");

    CLI::App* verify = app.add_subcommand("verify", "run consistency checks");
    verify->add_option("--config", config_path, "config file or builtin scene name")->required();
    verify->add_option("--check", check_set,
                       "comma-separated checks: oracle,prop1..prop6,examples | all | auto");
    verify->add_option("--out", out_path, "also write the report to this path");

    CLI::App* mesh = app.add_subcommand("mesh", "export a mesh or polyline");
    mesh->add_option("--config", config_path, "config file or builtin scene name")->required();
    mesh->add_option("--target", target, "surface | image-surface | gamma");
    mesh->add_option("--out", out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ruledlab::scene::SceneConfig cfg = ruledlab::scene::load_config(config_path);

        if (*eval) {
            emit(ruledlab::verify::eval_csv(cfg), out_path);
            return 0;
        }
        if (*classify) {
            const auto rep = ruledlab::verify::run_classify(cfg);
            std::cout << ruledlab::verify::classification_text(cfg, rep);
            if (!out_path.empty())
                emit(ruledlab::verify::gamma_csv(cfg), out_path);
            return 0;
        }
        if (*verify) {
            const auto checks = ruledlab::verify::parse_checks(check_set, cfg);
            const auto rep = ruledlab::verify::run_verify(cfg, checks);
            std::cout << rep.text();
            if (!out_path.empty())
                emit(rep.text(), out_path);
            return rep.overall() ? 0 : 1;
        }
        if (*mesh) {
            if (target == "surface")
                emit(obj_text(ruledlab::mesh::surface_mesh(cfg)), out_path);
            else if (target == "image-surface")
                emit(obj_text(ruledlab::mesh::image_surface_mesh(cfg)), out_path);
            else if (target == "gamma")
                emit(obj_text(ruledlab::mesh::gamma_polyline(cfg)), out_path);
            else
                throw ruledlab::Error("unknown mesh target '" + target + "'");
            return 0;
        }
    } catch (const ruledlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
