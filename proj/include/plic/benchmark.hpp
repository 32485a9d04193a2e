#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "plic/polyhedron.hpp"
#include "plic/positioning.hpp"
#include "plic/truncation.hpp"

namespace plic {

// Benchmark sample set: a spherical grid of plane normals crossed with a
// fraction sweep that clusters hard cases near 0 and 1.
struct SampleGrid {
    std::vector<double> fractions;                 // ascending
    std::vector<std::pair<double, double>> angles; // (phi, theta), lexicographic
};

inline SampleGrid generate_grid(int m_normal = 80, int m_vof = 50) {
    SampleGrid g;
    for (int k = 9; k >= 5; --k) g.fractions.push_back(std::pow(10.0, -k));
    for (int m = 1; m <= m_vof; ++m) {
        g.fractions.push_back(1e-4 + (m - 1) * (1.0 - 2e-4) / (m_vof - 1));
    }
    for (int k = 5; k <= 9; ++k) g.fractions.push_back(1.0 - std::pow(10.0, -k));
    for (int i = 1; i <= 2 * m_normal; ++i) {
        const double phi = std::numbers::pi / (2.0 * m_normal) * i;
        for (int j = 0; j <= m_normal; ++j) {
            g.angles.emplace_back(phi, std::numbers::pi / m_normal * j);
        }
    }
    return g;
}

inline Vec3 spherical_normal(double phi, double theta) {
    return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
}

enum class Method { proposed, newton };

struct InstanceRecord {
    double alpha, phi, theta;
    double s_star, alpha_achieved;
    std::int32_t n_trunc;
    PositionStatus status;
    std::int64_t time_ns;
};

// Per-shape sweep summary: per-fraction and per-normal averages plus grand
// means. n_av is the mean over fractions of the mean truncation count over
// normals (equal weights, so also the grand instance mean).
struct AggregateRow {
    std::string shape;
    std::vector<double> fractions;
    std::vector<double> n_av_alpha, n_std_alpha, t_av_alpha_ns;
    std::vector<double> normal_phi, normal_theta, n_av_normal;
    double n_av = 0.0, n_std = 0.0, t_av_ns = 0.0;
    std::size_t instance_count = 0, fallback_count = 0;
    double max_alpha_error = 0.0;
};

struct BenchResult {
    std::vector<InstanceRecord> records; // canonical order: (alpha, phi, theta)
    AggregateRow aggregate;
};

// Two-pass aggregation over records laid out fraction-major (the canonical
// record order produced by run_benchmark).
inline AggregateRow aggregate(const std::vector<InstanceRecord>& recs, const SampleGrid& grid,
                              const std::string& shape) {
    AggregateRow row;
    row.shape = shape;
    row.fractions = grid.fractions;
    const std::size_t na = grid.fractions.size();
    const std::size_t nn = grid.angles.size();
    row.instance_count = recs.size();
    row.n_av_alpha.assign(na, 0.0);
    row.n_std_alpha.assign(na, 0.0);
    row.t_av_alpha_ns.assign(na, 0.0);
    row.n_av_normal.assign(nn, 0.0);
    row.normal_phi.resize(nn);
    row.normal_theta.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        row.normal_phi[j] = grid.angles[j].first;
        row.normal_theta[j] = grid.angles[j].second;
    }
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nn; ++j) {
            const InstanceRecord& r = recs[i * nn + j];
            row.n_av_alpha[i] += r.n_trunc;
            row.t_av_alpha_ns[i] += static_cast<double>(r.time_ns);
            row.n_av_normal[j] += r.n_trunc;
            if (r.status == PositionStatus::bisection_fallback) ++row.fallback_count;
            row.max_alpha_error = std::max(row.max_alpha_error, std::abs(r.alpha_achieved - r.alpha));
        }
        row.n_av_alpha[i] /= static_cast<double>(nn);
        row.t_av_alpha_ns[i] /= static_cast<double>(nn);
        row.n_av += row.n_av_alpha[i];
        row.t_av_ns += row.t_av_alpha_ns[i];
    }
    row.n_av /= static_cast<double>(na);
    row.t_av_ns /= static_cast<double>(na);
    for (std::size_t j = 0; j < nn; ++j) row.n_av_normal[j] /= static_cast<double>(na);
    // Population standard deviations, per fraction and over all instances.
    double acc_all = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            const double d = recs[i * nn + j].n_trunc - row.n_av_alpha[i];
            acc += d * d;
            const double g = recs[i * nn + j].n_trunc - row.n_av;
            acc_all += g * g;
        }
        row.n_std_alpha[i] = std::sqrt(acc / static_cast<double>(nn));
    }
    row.n_std = std::sqrt(acc_all / static_cast<double>(recs.size()));
    return row;
}

// Single-pass (Welford) variant; must agree with aggregate() to roundoff.
inline AggregateRow aggregate_streaming(const std::vector<InstanceRecord>& recs,
                                        const SampleGrid& grid, const std::string& shape) {
    AggregateRow row;
    row.shape = shape;
    row.fractions = grid.fractions;
    const std::size_t na = grid.fractions.size();
    const std::size_t nn = grid.angles.size();
    row.instance_count = recs.size();
    row.n_av_alpha.assign(na, 0.0);
    row.n_std_alpha.assign(na, 0.0);
    row.t_av_alpha_ns.assign(na, 0.0);
    row.n_av_normal.assign(nn, 0.0);
    row.normal_phi.resize(nn);
    row.normal_theta.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        row.normal_phi[j] = grid.angles[j].first;
        row.normal_theta[j] = grid.angles[j].second;
    }
    std::vector<double> m2_alpha(na, 0.0);
    double mean_all = 0.0, m2_all = 0.0;
    std::size_t count_all = 0;
    for (std::size_t i = 0; i < na; ++i) {
        double mean = 0.0, m2 = 0.0, tmean = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            const InstanceRecord& r = recs[i * nn + j];
            const double x = r.n_trunc;
            const double d = x - mean;
            mean += d / static_cast<double>(j + 1);
            m2 += d * (x - mean);
            tmean += (static_cast<double>(r.time_ns) - tmean) / static_cast<double>(j + 1);
            ++count_all;
            const double g = x - mean_all;
            mean_all += g / static_cast<double>(count_all);
            m2_all += g * (x - mean_all);
            row.n_av_normal[j] += x;
            if (r.status == PositionStatus::bisection_fallback) ++row.fallback_count;
            row.max_alpha_error = std::max(row.max_alpha_error, std::abs(r.alpha_achieved - r.alpha));
        }
        row.n_av_alpha[i] = mean;
        row.n_std_alpha[i] = std::sqrt(m2 / static_cast<double>(nn));
        row.t_av_alpha_ns[i] = tmean;
        m2_alpha[i] = m2;
    }
    for (std::size_t i = 0; i < na; ++i) {
        row.n_av += (row.n_av_alpha[i] - row.n_av) / static_cast<double>(i + 1);
        row.t_av_ns += (row.t_av_alpha_ns[i] - row.t_av_ns) / static_cast<double>(i + 1);
    }
    for (std::size_t j = 0; j < nn; ++j) row.n_av_normal[j] /= static_cast<double>(na);
    row.n_std = std::sqrt(m2_all / static_cast<double>(count_all));
    return row;
}

// Sweep the full (fraction x normal) grid for one polyhedron. Each instance
// is timed around coefficient precompute plus positioning, matching how the
// cost would be paid inside a flow solver cell. Record order is canonical:
// fractions ascending, then angles lexicographic.
inline BenchResult run_benchmark(const Polyhedron& p, const std::string& shape_name,
                                 const SampleGrid& grid, Method method, double tol = 1e-12) {
    BenchResult out;
    out.records.reserve(grid.fractions.size() * grid.angles.size());
    PositionQuery q;
    q.tol = tol;
    for (double alpha : grid.fractions) {
        q.target_fraction = alpha;
        for (const auto& [phi, theta] : grid.angles) {
            const auto t0 = std::chrono::steady_clock::now();
            const StaticCoefficients c = precompute(p, spherical_normal(phi, theta));
            const PositionResult r = method == Method::proposed ? position(c, q)
                                                                : position_newton_baseline(c, q);
            const auto t1 = std::chrono::steady_clock::now();
            out.records.push_back({alpha, phi, theta, r.s_star, r.alpha_achieved, r.n_truncations,
                                   r.status,
                                   std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()});
        }
    }
    out.aggregate = aggregate(out.records, grid, shape_name);
    return out;
}

// --- output ----------------------------------------------------------------

inline const char* status_name(PositionStatus s) {
    switch (s) {
        case PositionStatus::converged: return "Converged";
        case PositionStatus::cubic_solved: return "CubicSolved";
        case PositionStatus::bisection_fallback: return "BisectionFallback";
        default: return "BoundaryClamped";
    }
}

inline void emit_csv(const std::vector<InstanceRecord>& recs, const std::string& shape,
                     std::ostream& os) {
    os << "shape,alpha,phi,theta,s_star,alpha_achieved,n_trunc,status,time_ns\n";
    char buf[256];
    for (const InstanceRecord& r : recs) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s,%lld\n",
                      shape.c_str(), r.alpha, r.phi, r.theta, r.s_star, r.alpha_achieved,
                      static_cast<int>(r.n_trunc), status_name(r.status),
                      static_cast<long long>(r.time_ns));
        os << buf;
    }
}

inline void emit_json(const std::vector<InstanceRecord>& recs, const std::string& shape,
                      std::ostream& os) {
    os << "[";
    char buf[320];
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const InstanceRecord& r = recs[i];
        std::snprintf(buf, sizeof buf,
                      "%s\n {\"shape\":\"%s\",\"alpha\":%.17g,\"phi\":%.17g,\"theta\":%.17g,"
                      "\"s_star\":%.17g,\"alpha_achieved\":%.17g,\"n_trunc\":%d,"
                      "\"status\":\"%s\",\"time_ns\":%lld}",
                      i ? "," : "", shape.c_str(), r.alpha, r.phi, r.theta, r.s_star,
                      r.alpha_achieved, static_cast<int>(r.n_trunc), status_name(r.status),
                      static_cast<long long>(r.time_ns));
        os << buf;
    }
    os << "\n]\n";
}

// Per-fraction curve data (iteration-count and timing averages over normals).
inline void emit_alpha_aggregates(const AggregateRow& row, std::ostream& os) {
    os << "shape,alpha,n_av,n_std,t_av_ns\n";
    char buf[192];
    for (std::size_t i = 0; i < row.fractions.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n", row.shape.c_str(),
                      row.fractions[i], row.n_av_alpha[i], row.n_std_alpha[i], row.t_av_alpha_ns[i]);
        os << buf;
    }
}

// Per-normal heatmap data (iteration count averaged over the fraction sweep).
inline void emit_normal_aggregates(const AggregateRow& row, std::ostream& os) {
    os << "shape,phi,theta,n_av\n";
    char buf[160];
    for (std::size_t j = 0; j < row.normal_phi.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", row.shape.c_str(),
                      row.normal_phi[j], row.normal_theta[j], row.n_av_normal[j]);
        os << buf;
    }
}

} // namespace plic
