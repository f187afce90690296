#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcode/csv.hpp"
#include "bcode/denoise.hpp"
#include "bcode/image.hpp"
#include "bcode/solvers.hpp"

namespace {

using nlohmann::json;

const std::map<std::string, bcode::CodingMethod> kMethods{
    {"boosted", bcode::CodingMethod::boosted},
    {"alternating", bcode::CodingMethod::alternating}};

const std::map<std::string, bcode::OracleKind> kOracles{
    {"l1", bcode::OracleKind::l1},
    {"l21", bcode::OracleKind::l21},
    {"heuristic", bcode::OracleKind::heuristic},
    {"exemplar", bcode::OracleKind::exemplar}};

json report_to_json(const bcode::DenoiseReport& rep) {
    json j;
    if (rep.psnr_noisy) j["psnr_noisy"] = *rep.psnr_noisy;
    if (rep.psnr_patch_avg) j["psnr_patch_avg"] = *rep.psnr_patch_avg;
    if (rep.psnr_denoised) j["psnr_denoised"] = *rep.psnr_denoised;
    j["basis_size"] = rep.basis_size;
    j["lambda"] = rep.lambda;
    j["gamma"] = rep.gamma;
    j["method"] = rep.method;
    j["oracle"] = rep.oracle;
    j["patch_size"] = rep.patch_size;
    j["stride"] = rep.stride;
    j["seed"] = rep.seed;
    j["wall_time"] = rep.wall_time;
    j["max_basis"] = rep.solver.max_basis;
    j["w_max_iters"] = rep.solver.w_max_iters;
    j["w_tol"] = rep.solver.w_tol;
    j["w_step0"] = rep.solver.w_step0;
    j["alt_iters"] = rep.solver.alt_iters;
    j["zero_row_tol"] = rep.solver.zero_row_tol;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw bcode::IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw bcode::IoError("short write to '" + path + "'");
}

struct Cli {
    // shared knobs
    std::string in_path, out_path, clean_path, report_path, basis_path, weights_path;
    std::string a_path, b_path;
    bcode::CodingMethod method = bcode::CodingMethod::boosted;
    bcode::OracleKind oracle = bcode::OracleKind::heuristic;
    double lambda = 0.1;
    double gamma = 1.0;
    double sigma = 0.1;
    std::size_t d = 32;
    std::size_t patch_size = 8;
    std::size_t stride = 4;
    std::uint64_t seed = 0;
    bcode::SolverOptions solver{};
    double refit_tau = 1e-8;
};

void add_solver_flags(CLI::App* cmd, Cli& c) {
    cmd->add_option("--w-max-iters", c.solver.w_max_iters, "Subgradient iterations per weight solve")
        ->capture_default_str();
    cmd->add_option("--w-tol", c.solver.w_tol, "Relative objective-change stop threshold")
        ->capture_default_str();
    cmd->add_option("--w-step0", c.solver.w_step0,
                    "Initial subgradient step (<=0 selects 1/||X||_F)")
        ->capture_default_str();
    cmd->add_option("--alt-iters", c.solver.alt_iters, "Alternations for the baseline")
        ->capture_default_str();
    cmd->add_option("--zero-row-tol", c.solver.zero_row_tol,
                    "Boosting stops when the new weight row stays this small")
        ->capture_default_str();
}

int run_denoise(Cli& c) {
    bcode::DenoiseOptions opt;
    opt.method = c.method;
    opt.oracle = c.oracle;
    opt.params = bcode::RegParams(c.lambda, c.gamma);
    opt.solver = c.solver;
    opt.solver.max_basis = c.d;
    opt.solver.seed = c.seed;
    opt.patch_size = c.patch_size;
    opt.stride = c.stride;
    opt.refit_tau = c.refit_tau;

    const bcode::Image noisy = bcode::read_pgm(c.in_path);
    bcode::Image clean;
    const bcode::Image* clean_ptr = nullptr;
    if (!c.clean_path.empty()) {
        clean = bcode::read_pgm(c.clean_path);
        clean_ptr = &clean;
    }

    const bcode::DenoiseOutcome outcome = bcode::denoise_image(noisy, opt, clean_ptr);
    bcode::write_pgm(c.out_path, outcome.image);
    if (!c.report_path.empty())
        write_text(c.report_path, report_to_json(outcome.report).dump(2) + "\n");
    if (!c.basis_path.empty())
        bcode::write_pgm(c.basis_path,
                         bcode::render_basis_tiles(outcome.coding.basis, opt.patch_size));

    if (outcome.report.psnr_denoised)
        std::printf("psnr_noisy=%.2f psnr_patch_avg=%.2f psnr_denoised=%.2f basis=%zu\n",
                    *outcome.report.psnr_noisy, *outcome.report.psnr_patch_avg,
                    *outcome.report.psnr_denoised, outcome.report.basis_size);
    else
        std::printf("basis=%zu wall_time=%.2fs\n", outcome.report.basis_size,
                    outcome.report.wall_time);
    return 0;
}

int run_noise(Cli& c) {
    const bcode::Image img = bcode::read_pgm(c.in_path);
    bcode::write_pgm(c.out_path, bcode::add_noise(img, c.sigma, c.seed));
    return 0;
}

int run_psnr(Cli& c) {
    const bcode::Image a = bcode::read_pgm(c.a_path);
    const bcode::Image b = bcode::read_pgm(c.b_path);
    std::printf("%.2f\n", bcode::psnr(a, b));
    return 0;
}

int run_train(Cli& c) {
    const bcode::Matrix x = bcode::read_csv(c.in_path);
    bcode::SolverOptions opts = c.solver;
    opts.max_basis = c.d;
    opts.seed = c.seed;

    bcode::CodingResult result;
    if (c.method == bcode::CodingMethod::boosted) {
        result = bcode::boosted_coding(x, bcode::RegParams(c.lambda, c.gamma), c.oracle, opts);
    } else {
        result = bcode::alternating_optimization(x, c.d, c.lambda, opts);
    }
    bcode::write_csv(c.out_path, result.basis);
    if (!c.weights_path.empty()) bcode::write_csv(c.weights_path, result.weights);
    if (!c.report_path.empty()) {
        json j;
        j["basis_size"] = result.basis.cols();
        j["steps_taken"] = result.steps_taken;
        j["stopped_early"] = result.stopped_early;
        j["objective_trace"] = result.objective_trace;
        j["provenance"] = result.provenance;
        write_text(c.report_path, j.dump(2) + "\n");
    }
    std::printf("basis=%zu steps=%zu%s\n", result.basis.cols(), result.steps_taken,
                result.stopped_early ? " (stopped early)" : "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse dictionary learning by boosted coding, with an alternating-optimization "
                 "baseline and a patch-based image denoiser"};
    app.require_subcommand(1);
    Cli c;

    CLI::App* denoise = app.add_subcommand("denoise", "Denoise a PGM image with learned patches");
    denoise->add_option("--in", c.in_path, "Noisy input image (PGM P5)")->required();
    denoise->add_option("--out", c.out_path, "Denoised output image (PGM P5)")->required();
    denoise->add_option("--clean", c.clean_path, "Clean reference for PSNR reporting");
    denoise->add_option("--report", c.report_path, "JSON report path");
    denoise->add_option("--basis", c.basis_path, "Tiled basis visualization (PGM P5)");
    denoise->add_option("--method", c.method, "Coding method")
        ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case))
        ->capture_default_str();
    denoise->add_option("--oracle", c.oracle, "Basis-vector oracle (boosted method)")
        ->transform(CLI::CheckedTransformer(kOracles, CLI::ignore_case))
        ->capture_default_str();
    denoise->add_option("--lambda", c.lambda, "Regularization weight")->capture_default_str();
    denoise->add_option("--gamma", c.gamma, "L1^2 weight relative to L_{2,1}^2")
        ->capture_default_str();
    denoise->add_option("--d", c.d, "Basis budget")->capture_default_str();
    denoise->add_option("--patch-size", c.patch_size, "Square patch edge")->capture_default_str();
    denoise->add_option("--stride", c.stride, "Patch stride")->capture_default_str();
    denoise->add_option("--seed", c.seed, "Seed for the alternating baseline")
        ->capture_default_str();
    denoise->add_option("--refit-tau", c.refit_tau, "Support threshold for the refit")
        ->capture_default_str();
    add_solver_flags(denoise, c);

    CLI::App* noise = app.add_subcommand("noise", "Add seeded Gaussian noise to a PGM image");
    noise->add_option("--in", c.in_path, "Input image (PGM P5)")->required();
    noise->add_option("--out", c.out_path, "Output image (PGM P5)")->required();
    noise->add_option("--sigma", c.sigma, "Noise standard deviation")->capture_default_str();
    noise->add_option("--seed", c.seed, "RNG seed")->capture_default_str();

    CLI::App* psnr = app.add_subcommand("psnr", "Print the PSNR between two PGM images");
    psnr->add_option("--a", c.a_path, "Reference image")->required();
    psnr->add_option("--b", c.b_path, "Test image")->required();

    CLI::App* train = app.add_subcommand("train", "Learn a basis for a raw CSV matrix");
    train->add_option("--in", c.in_path, "Data matrix (CSV, rows = dimensions)")->required();
    train->add_option("--out", c.out_path, "Learned basis (CSV)")->required();
    train->add_option("--weights", c.weights_path, "Optional coefficients output (CSV)");
    train->add_option("--report", c.report_path, "JSON report path");
    train->add_option("--method", c.method, "Coding method")
        ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case))
        ->capture_default_str();
    train->add_option("--oracle", c.oracle, "Basis-vector oracle (boosted method)")
        ->transform(CLI::CheckedTransformer(kOracles, CLI::ignore_case))
        ->capture_default_str();
    train->add_option("--lambda", c.lambda, "Regularization weight")->capture_default_str();
    train->add_option("--gamma", c.gamma, "L1^2 weight relative to L_{2,1}^2")
        ->capture_default_str();
    train->add_option("--d", c.d, "Basis budget")->capture_default_str();
    train->add_option("--seed", c.seed, "Seed for the alternating baseline")
        ->capture_default_str();
    add_solver_flags(train, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (denoise->parsed()) return run_denoise(c);
        if (noise->parsed()) return run_noise(c);
        if (psnr->parsed()) return run_psnr(c);
        if (train->parsed()) return run_train(c);
    } catch (const bcode::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
