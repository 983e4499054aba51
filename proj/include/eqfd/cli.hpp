#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqfd/config.hpp"
#include "eqfd/error.hpp"
#include "eqfd/harmonic_map.hpp"
#include "eqfd/io.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/schrodinger.hpp"
#include "eqfd/spectral.hpp"
#include "eqfd/stencil.hpp"
#include "eqfd/tensor_mesh.hpp"
#include "eqfd/weights.hpp"
#include "eqfd/weights_json.hpp"

namespace eqfd::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, nonconvergence = 3 };

using config::KeySpec;
using config::ValueType;

namespace schema {

inline void add_run(std::vector<KeySpec>& s, const std::string& command) {
    s.push_back({"command", ValueType::text, command, {command}});
    s.push_back({"run.out", ValueType::text, "eqfd-out"});
    s.push_back({"run.seed", ValueType::integer, "1"});
}

inline void add_weight(std::vector<KeySpec>& s, const std::string& prefix) {
    s.push_back({prefix + ".type", ValueType::text, "constant", {"constant", "gaussian_well", "table"}});
    s.push_back({prefix + ".level", ValueType::real, "1"});
    s.push_back({prefix + ".depth", ValueType::real, "0.9"});
    s.push_back({prefix + ".center", ValueType::real, "0"});
    s.push_back({prefix + ".width", ValueType::real, "1"});
    s.push_back({prefix + ".abscissae", ValueType::real_list, ""});
    s.push_back({prefix + ".values", ValueType::real_list, ""});
    s.push_back({prefix + ".json", ValueType::text, ""});
}

inline std::vector<KeySpec> mesh1d() {
    std::vector<KeySpec> s;
    add_run(s, "mesh1d");
    s.push_back({"mesh.a", ValueType::real, "0"});
    s.push_back({"mesh.b", ValueType::real, "1"});
    s.push_back({"mesh.segments", ValueType::integer, "50"});
    s.push_back({"mesh.inversion_tol", ValueType::real, "1e-10"});
    s.push_back({"mesh.panels_per_segment", ValueType::integer, "32"});
    add_weight(s, "weight");
    return s;
}

inline std::vector<KeySpec> mesh2d() {
    std::vector<KeySpec> s;
    add_run(s, "mesh2d");
    s.push_back({"mesh.x_min", ValueType::real, "-25"});
    s.push_back({"mesh.x_max", ValueType::real, "25"});
    s.push_back({"mesh.y_min", ValueType::real, "-25"});
    s.push_back({"mesh.y_max", ValueType::real, "25"});
    s.push_back({"mesh.x_segments", ValueType::integer, "32"});
    s.push_back({"mesh.y_segments", ValueType::integer, "32"});
    s.push_back({"mesh.solver", ValueType::text, "tensor", {"tensor", "harmonic", "both"}});
    s.push_back({"harmonic.tol", ValueType::real, "1e-8"});
    s.push_back({"harmonic.max_iter", ValueType::integer, "200"});
    s.push_back({"weight2d.type", ValueType::text, "product", {"product", "radial_well"}});
    s.push_back({"weight2d.depth", ValueType::real, "0.9"});
    s.push_back({"weight2d.center_x", ValueType::real, "0"});
    s.push_back({"weight2d.center_y", ValueType::real, "0"});
    s.push_back({"weight2d.width", ValueType::real, "50"});
    add_weight(s, "weight_x");
    add_weight(s, "weight_y");
    return s;
}

inline std::vector<KeySpec> stencil() {
    std::vector<KeySpec> s;
    add_run(s, "stencil");
    s.push_back({"stencil.h_left", ValueType::real_list, "1"});
    s.push_back({"stencil.h_right", ValueType::real_list, "1"});
    return s;
}

inline std::vector<KeySpec> solve_ho() {
    std::vector<KeySpec> s;
    add_run(s, "solve-ho");
    s.push_back({"problem.domain_min", ValueType::real, "-25"});
    s.push_back({"problem.domain_max", ValueType::real, "25"});
    s.push_back({"problem.nodes_per_axis", ValueType::integer, "50"});
    s.push_back({"problem.counting", ValueType::text, "nodes", {"nodes", "segments"}});
    s.push_back({"problem.hbar_omega", ValueType::real, "10"});
    s.push_back({"problem.weight_depth", ValueType::real, "0.9"});
    s.push_back({"problem.weight_width", ValueType::real, "0"});
    s.push_back({"problem.mesh", ValueType::text, "variable", {"uniform", "variable", "harmonic", "both"}});
    s.push_back({"problem.states", ValueType::integer, "6"});
    s.push_back({"solver.tol", ValueType::real, "1e-9"});
    s.push_back({"solver.method", ValueType::text, "auto", {"auto", "lanczos", "dense"}});
    s.push_back({"solver.max_matvecs", ValueType::integer, "0"});
    s.push_back({"output.eigenfunctions", ValueType::boolean, "true"});
    s.push_back({"output.hamiltonian", ValueType::boolean, "false"});
    return s;
}

}  // namespace schema

/// WeightSpec from `<prefix>.*` keys; a non-empty `<prefix>.json` takes precedence.
inline WeightSpec weight_from_config(const config::Resolved& c, const std::string& prefix) {
    const std::string json = c.text(prefix + ".json");
    if (!json.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            throw config::ConfigError("'" + prefix + ".json' is not valid JSON: " + e.what());
        }
        return weight_from_json(j);
    }
    const std::string type = c.text(prefix + ".type");
    if (type == "constant") return WeightSpec::constant(c.real(prefix + ".level"));
    if (type == "gaussian_well") {
        return WeightSpec::gaussian_well(c.real(prefix + ".depth"), c.real(prefix + ".center"), c.real(prefix + ".width"));
    }
    return WeightSpec::table(c.reals(prefix + ".abscissae"), c.reals(prefix + ".values"));
}

struct Context {
    config::Resolved cfg;
    std::filesystem::path out;
    std::ostream& stdout_;
};

namespace detail {

inline std::size_t segments_arg(const config::Resolved& c, const std::string& key) {
    const auto v = c.integer(key);
    if (v < 2) throw ValidationError("'" + key + "' must be >= 2");
    return static_cast<std::size_t>(v);
}

inline void write_manifest(const Context& ctx) {
    auto os = open_output(ctx.out / "manifest.cfg");
    ctx.cfg.write(os);
}

}  // namespace detail

inline int cmd_mesh1d(Context& ctx) {
    const auto& c = ctx.cfg;
    const WeightSpec g = weight_from_config(c, "weight");
    MeshOptions opts;
    opts.inversion_rel_tol = c.real("mesh.inversion_tol");
    opts.panels_per_segment = c.count("mesh.panels_per_segment");
    const Interval dom{c.real("mesh.a"), c.real("mesh.b")};
    if (!(dom.lo < dom.hi)) throw ValidationError("mesh.a must be < mesh.b");
    const Mesh1D mesh = generate_mesh(g, dom, detail::segments_arg(c, "mesh.segments"), opts);

    detail::write_manifest(ctx);
    auto os = open_output(ctx.out / "mesh1d.csv");
    mesh.write_csv(os, ShortestFormat{});

    auto& o = ctx.stdout_;
    o << "nodes = " << mesh.size() << '\n'
      << "s_total = " << format_double(mesh.s_total()) << '\n'
      << "equidist_residual = " << format_double(mesh.equidist_residual()) << '\n'
      << "min_spacing = " << format_double(mesh.min_spacing()) << '\n'
      << "max_spacing = " << format_double(mesh.max_spacing()) << '\n'
      << "csv = " << (ctx.out / "mesh1d.csv").string() << '\n';
    return ok;
}

inline int cmd_mesh2d(Context& ctx) {
    const auto& c = ctx.cfg;
    const Rectangle dom{{c.real("mesh.x_min"), c.real("mesh.x_max")}, {c.real("mesh.y_min"), c.real("mesh.y_max")}};
    if (!(dom.x.lo < dom.x.hi) || !(dom.y.lo < dom.y.hi)) throw ValidationError("mesh2d domain is empty");
    const std::size_t nx = detail::segments_arg(c, "mesh.x_segments");
    const std::size_t ny = detail::segments_arg(c, "mesh.y_segments");
    const std::string solver = c.text("mesh.solver");
    const bool radial = c.text("weight2d.type") == "radial_well";
    auto& o = ctx.stdout_;

    std::optional<Weight2D> joint;
    std::optional<TensorMesh> tensor;
    if (radial) {
        if (solver != "harmonic") throw ValidationError("a radial_well weight is not separable; use mesh.solver = harmonic");
        joint = Weight2D::radial_well(c.real("weight2d.depth"), c.real("weight2d.center_x"), c.real("weight2d.center_y"),
                                      c.real("weight2d.width"));
    } else {
        const WeightSpec gx = weight_from_config(c, "weight_x");
        const WeightSpec gy = weight_from_config(c, "weight_y");
        joint = Weight2D::product(gx, gy);
        if (solver != "harmonic") {
            const std::vector<WeightSpec> specs{gx, gy};
            const std::vector<Interval> doms{dom.x, dom.y};
            const std::vector<std::size_t> ns{nx, ny};
            tensor = generate_tensor_mesh(specs, doms, ns);
        }
    }

    detail::write_manifest(ctx);
    if (tensor) {
        auto os = open_output(ctx.out / "lattice_tensor.csv");
        tensor->write_csv(os, ShortestFormat{});
        o << "tensor_nodes = " << tensor->axis(0).size() << "x" << tensor->axis(1).size() << '\n'
          << "tensor_equidist_residual_x = " << format_double(tensor->axis(0).equidist_residual()) << '\n'
          << "tensor_equidist_residual_y = " << format_double(tensor->axis(1).equidist_residual()) << '\n';
    }
    if (solver != "tensor") {
        WinslowOptions wopts;
        wopts.tol = c.real("harmonic.tol");
        wopts.max_iter = c.count("harmonic.max_iter");
        const MappedGrid2D grid = solve_winslow(*joint, dom, nx + 1, ny + 1, wopts);
        auto os = open_output(ctx.out / "lattice_harmonic.csv");
        grid.write_csv(os, ShortestFormat{});
        o << "harmonic_residual = " << format_double(grid.residual()) << '\n'
          << "harmonic_iterations = " << grid.iterations() << '\n'
          << "harmonic_min_jacobian = " << format_double(grid.min_jacobian()) << '\n';
        if (tensor) {
            const double gap = grid.max_discrepancy(*tensor);
            o << "max_node_discrepancy = " << format_double(gap) << '\n'
              << "max_node_discrepancy_relative = " << format_double(gap / std::max(dom.x.length(), dom.y.length()))
              << '\n';
        }
    }
    return ok;
}

inline int cmd_stencil(Context& ctx, const std::vector<double>& h_left_cli, const std::vector<double>& h_right_cli) {
    auto& c = ctx.cfg;
    if (!h_left_cli.empty()) {
        std::string joined;
        for (double h : h_left_cli) joined += (joined.empty() ? "" : ",") + format_double(h);
        c.set("stencil.h_left", joined);
    }
    if (!h_right_cli.empty()) {
        std::string joined;
        for (double h : h_right_cli) joined += (joined.empty() ? "" : ",") + format_double(h);
        c.set("stencil.h_right", joined);
    }
    const auto hl = c.reals("stencil.h_left");
    const auto hr = c.reals("stencil.h_right");
    if (hl.size() != hr.size() || hl.empty()) {
        throw ValidationError("stencil.h_left and stencil.h_right must be non-empty lists of equal length");
    }

    std::ostringstream table;
    table << "order,h_left,h_right,a,b,c\n";
    for (std::size_t k = 0; k < hl.size(); ++k) {
        for (int order : {1, 2}) {
            const auto s = derivative_coeffs(order, hl[k], hr[k]);
            table << order << ',' << format_double(hl[k]) << ',' << format_double(hr[k]) << ',' << format_double(s.a)
                  << ',' << format_double(s.b) << ',' << format_double(s.c) << '\n';
        }
    }
    detail::write_manifest(ctx);
    auto os = open_output(ctx.out / "stencil.csv");
    os << table.str();
    ctx.stdout_ << table.str();
    return ok;
}

inline int cmd_solve_ho(Context& ctx) {
    const auto& c = ctx.cfg;
    HOProblem problem;
    problem.domain = {c.real("problem.domain_min"), c.real("problem.domain_max")};
    problem.nodes_per_axis = c.count("problem.nodes_per_axis");
    problem.counting = c.text("problem.counting") == "nodes" ? NodeCounting::nodes : NodeCounting::segments;
    problem.hbar_omega = c.real("problem.hbar_omega");
    problem.weight_depth = c.real("problem.weight_depth");
    problem.weight_width = c.real("problem.weight_width");
    const std::string mesh = c.text("problem.mesh");
    problem.mesh_kind = mesh == "uniform"    ? MeshKind::uniform
                        : mesh == "harmonic" ? MeshKind::harmonic_map
                                             : MeshKind::variable;
    if (problem.nodes_per_axis < 2) throw ValidationError("problem.nodes_per_axis too small");
    problem.validate();

    const std::size_t k = c.count("problem.states");
    if (k < 1) throw ValidationError("problem.states must be >= 1");
    EigenOptions eopts;
    eopts.tol = c.real("solver.tol");
    eopts.seed = static_cast<std::uint64_t>(c.integer("run.seed"));
    eopts.max_matvecs = c.count("solver.max_matvecs");
    const std::string method = c.text("solver.method");
    eopts.method = method == "lanczos" ? EigenMethod::lanczos : method == "dense" ? EigenMethod::dense : EigenMethod::automatic;

    detail::write_manifest(ctx);
    auto& o = ctx.stdout_;
    const auto emit = [&](const HOSolution& sol) {
        const auto dir = ctx.out / to_string(sol.problem.mesh_kind);
        {
            auto os = open_output(dir / "spectrum.csv");
            sol.write_spectrum_csv(os, ShortestFormat{});
        }
        if (c.boolean("output.eigenfunctions")) {
            for (std::size_t s = 0; s < k; ++s) {
                auto os = open_output(dir / ("psi_" + std::to_string(s) + ".csv"));
                sol.write_eigenfunction_csv(os, s, ShortestFormat{});
            }
        }
        if (c.boolean("output.hamiltonian")) {
            auto os = open_output(dir / "hamiltonian.coo");
            build_hamiltonian(sol.problem, sol.mesh).matrix.write_coordinate(os, ShortestFormat{});
        }
        o << "[" << to_string(sol.problem.mesh_kind) << "] dimension = " << sol.dimension()
          << ", solver = " << sol.spectrum.method << '\n';
        for (std::size_t s = 0; s < k; ++s) {
            o << "  E" << s << " = " << format_double(sol.spectrum.values[s]) << " MeV  (exact "
              << format_double(sol.analytic[s]) << ", |error| " << format_double(sol.abs_errors[s]) << ", shell overlap "
              << format_double(sol.shell_overlaps[s]) << ")\n";
        }
    };

    if (mesh == "both") {
        const ComparisonReport report = compare_meshes(problem, k, eopts);
        emit(report.uniform);
        emit(report.variable);
        {
            auto os = open_output(ctx.out / "comparison.csv");
            report.write_csv(os, ShortestFormat{});
        }
        auto os = open_output(ctx.out / "comparison.txt");
        report.write_summary(os, ShortestFormat{});
        report.write_summary(o, ShortestFormat{});
    } else {
        emit(solve_ho(problem, k, eopts));
    }
    return ok;
}

/// Entry point shared by the eqfd executable and the tests. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Equidistributed variable-step finite differences"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    std::optional<long long> seed;
    std::vector<double> h_left, h_right;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key-value config file");
        sub->add_option("--out", out_dir, "output directory (overrides run.out)");
        sub->add_option("--seed", seed, "random seed (overrides run.seed)");
    };
    auto* mesh1d = app.add_subcommand("mesh1d", "equidistributed 1D mesh");
    auto* mesh2d = app.add_subcommand("mesh2d", "separable tensor or harmonic-map 2D mesh");
    auto* stencil = app.add_subcommand("stencil", "nonuniform 3-point coefficient table");
    auto* solve = app.add_subcommand("solve-ho", "2D harmonic oscillator on uniform/variable meshes");
    for (auto* sub : {mesh1d, mesh2d, stencil, solve}) common(sub);
    stencil->add_option("--h-left", h_left, "left spacings");
    stencil->add_option("--h-right", h_right, "right spacings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        std::vector<KeySpec> keys;
        std::string name;
        if (mesh1d->parsed()) keys = schema::mesh1d(), name = "mesh1d";
        if (mesh2d->parsed()) keys = schema::mesh2d(), name = "mesh2d";
        if (stencil->parsed()) keys = schema::stencil(), name = "stencil";
        if (solve->parsed()) keys = schema::solve_ho(), name = "solve-ho";

        std::vector<config::Entry> entries;
        if (!config_path.empty()) entries = config::load(config_path);
        config::Resolved cfg(keys, entries);
        if (!out_dir.empty()) cfg.set("run.out", out_dir);
        if (seed) cfg.set("run.seed", std::to_string(*seed));
        const auto out_path = std::filesystem::absolute(cfg.text("run.out")).lexically_normal();
        cfg.set("run.out", out_path.string());

        Context ctx{std::move(cfg), out_path, out};
        if (name == "mesh1d") return cmd_mesh1d(ctx);
        if (name == "mesh2d") return cmd_mesh2d(ctx);
        if (name == "stencil") return cmd_stencil(ctx, h_left, h_right);
        return cmd_solve_ho(ctx);
    } catch (const config::ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return usage;
    } catch (const ConvergenceError& e) {
        err << "not converged: " << e.what() << "\nlast residual = " << format_double(e.last_residual()) << '\n';
        return nonconvergence;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return nonconvergence;
    } catch (const Error& e) {
        err << "validation error: " << e.what() << '\n';
        return validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

}  // namespace eqfd::cli
