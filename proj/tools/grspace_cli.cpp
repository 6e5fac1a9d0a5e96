// Command-line front end over the grspace C API.
//
// Exit codes: 0 all selected checks pass, 1 at least one check failed,
// 2 file/definition errors or bad usage.

#include <grspace.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct CliFlags {
    std::string input;
    int points = 50;
    unsigned long long seed = 0;
    double tol = 1e-9;
    std::string kind = "all";
    std::string json_path;
    int curves = 10;
    int steps = 1000;
    double step = 1e-3;
    bool tol_given = false;
};

void add_common(CLI::App* cmd, CliFlags& f) {
    cmd->add_option("input", f.input, "definition file")->required();
    cmd->add_option("--points", f.points, "sample points per check");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--tol", f.tol, "residual tolerance")
        ->each([&f](const std::string&) { f.tol_given = true; });
    cmd->add_option("--kind", f.kind, "covariant-derivative kind: 1..4 or all")
        ->check(CLI::IsMember({"1", "2", "3", "4", "all"}));
    cmd->add_option("--json", f.json_path, "write the machine report to this path");
}

int emit(const char* json, const std::string& json_path) {
    char* human = nullptr;
    if (grs_render_report(json, &human) != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    std::cout << human;
    grs_string_free(human);
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << json_path << "\n";
            return 2;
        }
        out << json;
    }
    return 0;
}

grs_options make_options(const CliFlags& f) {
    grs_options opt;
    grs_options_init(&opt);
    opt.points = f.points;
    opt.seed = f.seed;
    opt.tol = f.tol;
    opt.kind = f.kind == "all" ? 0 : std::stoi(f.kind);
    opt.geodesic_count = f.curves;
    opt.geodesic_steps = f.steps;
    opt.geodesic_step = f.step;
    if (f.tol_given) opt.geodesic_tol = f.tol;
    return opt;
}

int run_space_command(const CliFlags& f, bool kahler) {
    grs_space* space = nullptr;
    if (grs_space_load_file(f.input.c_str(), &space) != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    grs_options opt = make_options(f);
    char* json = nullptr;
    int pass = 0;
    grs_status st = kahler
                        ? grs_check_kahler(space, f.input.c_str(), &opt, &json, &pass)
                        : grs_check_space(space, f.input.c_str(), &opt, &json, &pass);
    grs_space_free(space);
    if (st != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    int rc = emit(json, f.json_path);
    grs_string_free(json);
    if (rc != 0) return rc;
    return pass ? 0 : 1;
}

int run_pair_command(const CliFlags& f, bool geodesic) {
    grs_pair* pair = nullptr;
    if (grs_pair_load_file(f.input.c_str(), &pair) != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    grs_options opt = make_options(f);
    char* json = nullptr;
    int pass = 0;
    grs_status st = geodesic ? grs_geodesic_test(pair, f.input.c_str(), &opt, &json, &pass)
                             : grs_check_mapping(pair, f.input.c_str(), &opt, &json, &pass);
    grs_pair_free(pair);
    if (st != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    int rc = emit(json, f.json_path);
    grs_string_free(json);
    if (rc != 0) return rc;
    return pass ? 0 : 1;
}

int run_build_pair(const CliFlags& f, const std::string& output) {
    std::ifstream in(f.input, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << f.input << "\n";
        return 2;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char* pair_text = nullptr;
    if (grs_build_pair(text.c_str(), &pair_text) != GRS_OK) {
        std::cerr << "error: " << grs_last_error() << "\n";
        return 2;
    }
    if (output.empty()) {
        std::cout << pair_text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << output << "\n";
            grs_string_free(pair_text);
            return 2;
        }
        out << pair_text;
    }
    grs_string_free(pair_text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification engine for generalized Riemannian spaces"};
    app.require_subcommand(1);

    CliFlags f;
    auto* cs = app.add_subcommand("check-space", "connection and torsion summary of a space file");
    add_common(cs, f);
    auto* ck = app.add_subcommand("check-kahler",
                                  "generalized-Kahler axioms and torsion relations of a space");
    add_common(ck, f);
    auto* cm = app.add_subcommand("check-mapping",
                                  "geodesic-mapping condition systems of a pair file");
    add_common(cm, f);
    auto* gt = app.add_subcommand("geodesic-test",
                                  "integrate geodesics and measure the mapping defect");
    add_common(gt, f);
    gt->add_option("--curves", f.curves, "number of geodesics");
    gt->add_option("--steps", f.steps, "RK4 steps per geodesic");
    gt->add_option("--step", f.step, "RK4 step size");
    std::string build_output;
    auto* bp = app.add_subcommand("build-pair",
                                  "expand [source]+[mapping] into a full pair file");
    bp->add_option("input", f.input, "definition file")->required();
    bp->add_option("-o,--output", build_output, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (cs->parsed()) return run_space_command(f, false);
    if (ck->parsed()) return run_space_command(f, true);
    if (cm->parsed()) return run_pair_command(f, false);
    if (gt->parsed()) return run_pair_command(f, true);
    if (bp->parsed()) return run_build_pair(f, build_output);
    return 2;
}
