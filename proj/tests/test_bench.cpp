#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "plic/benchmark.hpp"
#include "plic/shapes.hpp"

using namespace plic;

namespace {

bool close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close_vec(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!close(a[i], b[i])) return false;
    }
    return true;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("sample grid has the documented shape") {
    const SampleGrid g = generate_grid();
    REQUIRE(g.fractions.size() == 60);
    REQUIRE(g.angles.size() == 12960);

    // five decades per tail plus the uniform interior sweep
    for (int k = 0; k < 5; ++k) {
        CHECK(g.fractions[k] == std::pow(10.0, -(9 - k)));
        CHECK(close(g.fractions[59 - k], 1.0 - std::pow(10.0, -(9 - k))));
    }
    CHECK(g.fractions[5] == 1e-4);
    CHECK(close(g.fractions[54], 1.0 - 1e-4));
    for (std::size_t i = 1; i < g.fractions.size(); ++i) {
        CHECK(g.fractions[i] > g.fractions[i - 1]);
    }
    // complement closure: pairing opposite ends of the sweep covers alpha and
    // 1-alpha together
    const std::size_t n = g.fractions.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(g.fractions[i] + g.fractions[n - 1 - i] - 1.0) <= 1e-15);
    }
}

TEST_CASE("coarsest normal grid hits the four canonical directions") {
    const SampleGrid g = generate_grid(1, 2);
    const double pi = std::numbers::pi;
    REQUIRE(g.angles.size() == 4);
    CHECK(g.angles[0] == std::pair{pi / 2.0, 0.0});
    CHECK(g.angles[1] == std::pair{pi / 2.0, pi});
    CHECK(g.angles[2] == std::pair{pi, 0.0});
    CHECK(g.angles[3] == std::pair{pi, pi});
    CHECK(g.fractions.size() == 12);
}

TEST_CASE("spherical normals are unit vectors") {
    const SampleGrid g = generate_grid(3, 2);
    for (const auto& [phi, theta] : g.angles) {
        CHECK_THAT(norm(spherical_normal(phi, theta)), Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    CHECK(norm(spherical_normal(std::numbers::pi / 2.0, 0.0) - Vec3{0, 0, 1}) <= 1e-15);
}

TEST_CASE("benchmark sweep: canonical order, convergence, reproducible counts") {
    const Polyhedron cube = make_cube();
    const SampleGrid g = generate_grid(2, 3); // 13 fractions x 12 normals
    const BenchResult run = run_benchmark(cube, "cube", g, Method::proposed);
    REQUIRE(run.records.size() == g.fractions.size() * g.angles.size());

    const std::size_t nn = g.angles.size();
    for (std::size_t i = 0; i < g.fractions.size(); ++i) {
        for (std::size_t j = 0; j < nn; ++j) {
            const InstanceRecord& r = run.records[i * nn + j];
            CHECK(r.alpha == g.fractions[i]);
            CHECK(r.phi == g.angles[j].first);
            CHECK(r.theta == g.angles[j].second);
            CHECK(std::abs(r.alpha_achieved - r.alpha) <= 1e-12);
            CHECK(r.status != PositionStatus::bisection_fallback);
        }
    }
    CHECK(run.aggregate.max_alpha_error <= 1e-12);
    CHECK(run.aggregate.fallback_count == 0);
    CHECK(run.aggregate.instance_count == run.records.size());

    // iteration counts must be a pure function of the inputs
    const BenchResult rerun = run_benchmark(cube, "cube", g, Method::proposed);
    for (std::size_t i = 0; i < run.records.size(); ++i) {
        CHECK(run.records[i].n_trunc == rerun.records[i].n_trunc);
        CHECK(run.records[i].s_star == rerun.records[i].s_star);
    }
}

TEST_CASE("two-pass and streaming aggregation agree") {
    const Polyhedron p = make_tetrahedron();
    const SampleGrid g = generate_grid(2, 4);
    const BenchResult run = run_benchmark(p, "tetra", g, Method::proposed);
    const AggregateRow a = aggregate(run.records, g, "tetra");
    const AggregateRow b = aggregate_streaming(run.records, g, "tetra");

    CHECK(a.shape == b.shape);
    CHECK(a.instance_count == b.instance_count);
    CHECK(a.fallback_count == b.fallback_count);
    CHECK(close(a.n_av, b.n_av));
    CHECK(close(a.n_std, b.n_std));
    CHECK(close(a.t_av_ns, b.t_av_ns));
    CHECK(close(a.max_alpha_error, b.max_alpha_error));
    CHECK(close_vec(a.n_av_alpha, b.n_av_alpha));
    CHECK(close_vec(a.n_std_alpha, b.n_std_alpha));
    CHECK(close_vec(a.t_av_alpha_ns, b.t_av_alpha_ns));
    CHECK(close_vec(a.n_av_normal, b.n_av_normal));
    CHECK(a.normal_phi == b.normal_phi);
    CHECK(a.normal_theta == b.normal_theta);
}

TEST_CASE("newton baseline sweeps the same grid") {
    const Polyhedron p = make_cube();
    const SampleGrid g = generate_grid(1, 2);
    const BenchResult run = run_benchmark(p, "cube", g, Method::newton);
    REQUIRE(run.records.size() == g.fractions.size() * g.angles.size());
    CHECK(run.aggregate.max_alpha_error <= 1e-12);
    for (const InstanceRecord& r : run.records) CHECK(r.n_trunc >= 0);
}

TEST_CASE("CSV output: header, row shape, value round-trip") {
    std::ostringstream empty;
    emit_csv({}, "cube", empty);
    CHECK(empty.str() == "shape,alpha,phi,theta,s_star,alpha_achieved,n_trunc,status,time_ns\n");

    const InstanceRecord rec{0.27, 1.25, 2.5, 0.7071067811865476, 0.27000000000000002,
                             3, PositionStatus::cubic_solved, 1234};
    std::ostringstream os;
    emit_csv({rec}, "dodeca", os);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == 2);

    std::vector<std::string> fields;
    std::istringstream row(lines[1]);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "dodeca");
    CHECK(std::stod(fields[1]) == rec.alpha);
    CHECK(std::stod(fields[2]) == rec.phi);
    CHECK(std::stod(fields[3]) == rec.theta);
    CHECK(std::stod(fields[4]) == rec.s_star);   // %.17g survives the round trip
    CHECK(std::stod(fields[5]) == rec.alpha_achieved);
    CHECK(std::stoi(fields[6]) == rec.n_trunc);
    CHECK(fields[7] == "CubicSolved");
    CHECK(std::stoll(fields[8]) == rec.time_ns);
}

TEST_CASE("JSON output parses and preserves every field") {
    const std::vector<InstanceRecord> recs = {
        {1e-9, 0.5, 1.0, 0.001, 1.0000000000000001e-09, 2, PositionStatus::converged, 111},
        {0.5, 1.5, 2.0, 0.5, 0.5, 1, PositionStatus::cubic_solved, 222},
        {0.999, 2.5, 3.0, 0.998, 0.999, 7, PositionStatus::bisection_fallback, 333},
    };
    std::ostringstream os;
    emit_json(recs, "torus", os);
    const nlohmann::json doc = nlohmann::json::parse(os.str());
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(doc[i]["shape"] == "torus");
        CHECK(doc[i]["alpha"].get<double>() == recs[i].alpha);
        CHECK(doc[i]["phi"].get<double>() == recs[i].phi);
        CHECK(doc[i]["theta"].get<double>() == recs[i].theta);
        CHECK(doc[i]["s_star"].get<double>() == recs[i].s_star);
        CHECK(doc[i]["alpha_achieved"].get<double>() == recs[i].alpha_achieved);
        CHECK(doc[i]["n_trunc"].get<int>() == recs[i].n_trunc);
        CHECK(doc[i]["status"].get<std::string>() == status_name(recs[i].status));
        CHECK(doc[i]["time_ns"].get<std::int64_t>() == recs[i].time_ns);
    }

    std::ostringstream none;
    emit_json({}, "torus", none);
    CHECK(nlohmann::json::parse(none.str()).empty());
}

TEST_CASE("aggregate table emitters produce one row per entry") {
    const Polyhedron p = make_cube();
    const SampleGrid g = generate_grid(1, 3);
    const BenchResult run = run_benchmark(p, "cube", g, Method::proposed);

    std::ostringstream alpha_csv;
    emit_alpha_aggregates(run.aggregate, alpha_csv);
    const auto alpha_lines = split_lines(alpha_csv.str());
    REQUIRE(alpha_lines.size() == g.fractions.size() + 1);
    CHECK(alpha_lines[0] == "shape,alpha,n_av,n_std,t_av_ns");
    CHECK(alpha_lines[1].rfind("cube,", 0) == 0);

    std::ostringstream normal_csv;
    emit_normal_aggregates(run.aggregate, normal_csv);
    const auto normal_lines = split_lines(normal_csv.str());
    REQUIRE(normal_lines.size() == g.angles.size() + 1);
    CHECK(normal_lines[0] == "shape,phi,theta,n_av");
}
