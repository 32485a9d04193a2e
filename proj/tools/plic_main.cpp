// Command-line front end: full benchmark sweeps, single positioning queries,
// and oracle-based volume verification for the built-in shapes or meshes
// loaded from file.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plic/plic.hpp"

namespace {

struct ShapeOptions {
    std::string name = "cube";
    double psi1 = 1.0, psi2 = 1.0;
    plic::TorusSpec torus;
    bool strict_quads = false;
};

plic::Polyhedron make_shape(const ShapeOptions& o) {
    if (o.name == "cube") return plic::make_cube();
    if (o.name == "cuboid") return plic::make_cuboid(o.psi1, o.psi2);
    if (o.name == "tetra") return plic::make_tetrahedron();
    if (o.name == "dodeca") return plic::make_dodecahedron();
    if (o.name == "torus") return plic::make_torus(o.torus, o.strict_quads);
    if (o.name == "letterA") return plic::make_letter_a();
    if (o.name.rfind("file:", 0) == 0) return plic::load_off(o.name.substr(5));
    throw CLI::ValidationError("--shape", "unknown shape '" + o.name + "'");
}

void add_shape_options(CLI::App* cmd, ShapeOptions& o) {
    cmd->add_option("--shape", o.name,
                    "cube|cuboid|tetra|dodeca|torus|letterA|file:<path>")
        ->capture_default_str();
    cmd->add_option("--psi1", o.psi1, "cuboid edge ratio y/x")->capture_default_str();
    cmd->add_option("--psi2", o.psi2, "cuboid edge ratio z/x")->capture_default_str();
    cmd->add_option("--torus-R", o.torus.R, "torus center-circle radius")->capture_default_str();
    cmd->add_option("--torus-gamma", o.torus.gamma, "torus tube/center radius ratio")
        ->capture_default_str();
    cmd->add_option("--torus-n1", o.torus.n1, "torus samples along the center circle")
        ->capture_default_str();
    cmd->add_option("--torus-n2", o.torus.n2, "torus samples around the tube")
        ->capture_default_str();
    cmd->add_flag("--strict-quads", o.strict_quads,
                  "validate the torus quad faces strictly (no planarity-split fallback)");
}

std::string sidecar(const std::string& out, const char* suffix) {
    const auto dot = out.find_last_of('.');
    const auto slash = out.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? out.substr(0, dot) : out) + suffix;
}

int run_bench(const ShapeOptions& shape_opts, int m_normal, int m_vof, const std::string& method,
              double tol, const std::string& format, const std::string& out) {
    const plic::Polyhedron p = make_shape(shape_opts);
    const plic::SampleGrid grid = plic::generate_grid(m_normal, m_vof);
    const plic::Method m = method == "newton" ? plic::Method::newton : plic::Method::proposed;
    const plic::BenchResult res = plic::run_benchmark(p, shape_opts.name, grid, m, tol);
    const plic::AggregateRow& a = res.aggregate;

    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) {
            std::cerr << "cannot open '" << out << "' for writing\n";
            return 1;
        }
        if (format == "json") {
            plic::emit_json(res.records, shape_opts.name, os);
        } else {
            plic::emit_csv(res.records, shape_opts.name, os);
        }
        std::ofstream oa(sidecar(out, "_alpha.csv"));
        plic::emit_alpha_aggregates(a, oa);
        std::ofstream on(sidecar(out, "_normal.csv"));
        plic::emit_normal_aggregates(a, on);
    }

    std::printf("shape=%s method=%s instances=%zu\n", a.shape.c_str(), method.c_str(),
                a.instance_count);
    std::printf("  n_av=%.4f (std %.4f)  t_av=%.4f us\n", a.n_av, a.n_std, a.t_av_ns * 1e-3);
    std::printf("  fallbacks=%zu (%.4f%%)  max |alpha - target| = %.3e\n", a.fallback_count,
                100.0 * static_cast<double>(a.fallback_count) /
                    static_cast<double>(a.instance_count),
                a.max_alpha_error);
    return a.max_alpha_error > tol ? 2 : 0;
}

int run_position(const ShapeOptions& shape_opts, const std::vector<double>& normal, double alpha,
                 double tol, bool trace, const std::string& method) {
    const plic::Polyhedron p = make_shape(shape_opts);
    const plic::StaticCoefficients c =
        plic::precompute(p, {normal[0], normal[1], normal[2]});
    plic::PositionQuery q;
    q.target_fraction = alpha;
    q.tol = tol;
    q.record_trace = trace;
    const plic::PositionResult r =
        method == "newton" ? plic::position_newton_baseline(c, q) : plic::position(c, q);
    if (trace) {
        const char* kinds[] = {"initial", "taylor", "newton", "bisection", "cubic"};
        for (const plic::TraceEntry& t : r.trace) {
            std::printf("  %-9s s=%-22.16g alpha=%.16g\n", kinds[static_cast<int>(t.kind)], t.s,
                        t.alpha);
        }
    }
    std::printf("s_star=%.17g alpha_achieved=%.17g n_trunc=%d status=%s\n", r.s_star,
                r.alpha_achieved, r.n_truncations, plic::status_name(r.status));
    return std::abs(r.alpha_achieved - alpha) <= tol ||
                   r.status == plic::PositionStatus::boundary_clamped
               ? 0
               : 2;
}

int run_verify(const ShapeOptions& shape_opts, double samples, std::uint64_t seed) {
    const plic::Polyhedron p = make_shape(shape_opts);
    const auto n = static_cast<std::size_t>(samples);
    const double vol = plic::total_volume(p);
    bool ok = true;

    const plic::McSampler sampler(p, n, seed);
    const plic::McEstimate total = sampler.estimate_total();
    const double dev = std::abs(total.value - vol) / std::max(total.std_error, 1e-300);
    std::printf("total volume: exact=%.12g mc=%.12g +- %.3g (%.2f sigma) %s\n", vol, total.value,
                total.std_error, dev, dev <= 3.0 ? "ok" : "FAIL");
    ok = ok && dev <= 3.0;

    // Random truncation planes, checked against the convex clipping oracle
    // when the shape is convex, otherwise against the Monte Carlo cloud.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    const auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
    bool convex = true;
    try {
        plic::clip_convex_volume(p, {{0, 0, 1}, p.vertex_centroid(), 1e300});
    } catch (const plic::NotConvex&) {
        convex = false;
    }
    const int n_frames = convex ? 20 : 5;
    for (int i = 0; i < n_frames; ++i) {
        const double z = 1.0 - 2.0 * unit();
        const double ph = 2.0 * std::numbers::pi * unit();
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        const plic::Vec3 ng = {rr * std::cos(ph), rr * std::sin(ph), z};
        const plic::StaticCoefficients c = plic::precompute(p, ng);
        const double s = c.s_min + (0.02 + 0.96 * unit()) * c.L;
        const double v = plic::truncated_volume(c, s).V;
        const plic::PlaneFrame frame{c.normal, c.base, s};
        if (convex) {
            const double ref = plic::clip_convex_volume(p, frame);
            const bool pass = std::abs(v - ref) <= 1e-10 * vol;
            std::printf("clip oracle:  s=%-10.4g V=%.12g ref=%.12g diff=%.3e %s\n", s, v, ref,
                        std::abs(v - ref), pass ? "ok" : "FAIL");
            ok = ok && pass;
        } else {
            const plic::McEstimate e = sampler.estimate(frame);
            const double nd = std::abs(v - e.value) / std::max(e.std_error, 1e-300);
            const bool pass = nd <= 3.0;
            std::printf("mc oracle:    s=%-10.4g V=%.12g mc=%.12g +- %.3g (%.2f sigma) %s\n", s, v,
                        e.value, e.std_error, nd, pass ? "ok" : "FAIL");
            ok = ok && pass;
        }
    }
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PLIC plane positioning in arbitrary polyhedra"};
    app.require_subcommand(1);

    ShapeOptions bench_shape, pos_shape, verify_shape;

    auto* bench = app.add_subcommand("bench", "run the (fraction x normal) benchmark sweep");
    int m_normal = 80, m_vof = 50;
    double bench_tol = 1e-12;
    std::string method = "proposed", format = "csv", out;
    add_shape_options(bench, bench_shape);
    bench->add_option("--m-normal", m_normal, "normal grid resolution")->capture_default_str();
    bench->add_option("--m-vof", m_vof, "fraction sweep resolution (>= 2)")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    bench->add_option("--method", method)->check(CLI::IsMember({"proposed", "newton"}))
        ->capture_default_str();
    bench->add_option("--tol", bench_tol, "volume-fraction tolerance")->capture_default_str();
    bench->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    bench->add_option("--out", out, "instance record file (aggregates go to *_alpha.csv/*_normal.csv)");

    auto* pos = app.add_subcommand("position", "position one plane at a given volume fraction");
    std::vector<double> normal = {0.0, 0.0, 1.0};
    double alpha = 0.5, pos_tol = 1e-12;
    bool trace = false;
    std::string pos_method = "proposed";
    add_shape_options(pos, pos_shape);
    pos->add_option("--normal", normal, "plane normal x,y,z")->expected(3)->delimiter(',');
    pos->add_option("--alpha", alpha, "target volume fraction")->capture_default_str();
    pos->add_option("--tol", pos_tol)->capture_default_str();
    pos->add_option("--method", pos_method)->check(CLI::IsMember({"proposed", "newton"}))
        ->capture_default_str();
    pos->add_flag("--trace", trace, "print one line per iteration");

    auto* verify = app.add_subcommand("verify", "check truncation volumes against oracles");
    double samples = 1e7;
    std::uint64_t seed = 42;
    add_shape_options(verify, verify_shape);
    verify->add_option("--samples", samples, "Monte Carlo sample count")->capture_default_str();
    verify->add_option("--seed", seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            return run_bench(bench_shape, m_normal, m_vof, method, bench_tol, format, out);
        }
        if (pos->parsed()) {
            return run_position(pos_shape, normal, alpha, pos_tol, trace, pos_method);
        }
        return run_verify(verify_shape, samples, seed);
    } catch (const plic::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
