#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "plic/error.hpp"
#include "plic/polyhedron.hpp"
#include "plic/truncation.hpp"

namespace plic {

// Independent reference computations for the truncated volume. Nothing here
// shares code with the coefficient-based evaluation: the convex oracle clips
// face polygons and integrates them directly, the Monte Carlo oracle counts
// ray-cast point classifications.

// --- convex half-space clipping ------------------------------------------

// Volume of {x in p : lambda(x) <= 0} for a CONVEX p, by clipping every face
// polygon against the half-space and closing the result with the cap polygon
// (plane intersection points sorted by angle). Throws NotConvex if some
// vertex lies outside some face plane by more than 1e-10 * diagonal.
inline double clip_convex_volume(const Polyhedron& p, const PlaneFrame& frame) {
    const double h = p.bbox_diagonal();
    for (std::size_t k = 0; k < p.face_count(); ++k) {
        const auto& loop = p.faces()[k];
        const Vec3& n = p.face_geometry(k).normal;
        const Vec3& x0 = p.vertices()[loop[0]];
        for (const Vec3& v : p.vertices()) {
            if (dot(v - x0, n) > 1e-10 * h) throw NotConvex("vertex outside a face plane");
        }
    }

    const Vec3 c = p.vertex_centroid();
    std::vector<Vec3> kept, cap;
    double vol3 = 0.0; // 3 * volume
    for (const auto& loop : p.faces()) {
        kept.clear();
        for (std::size_t m = 0; m < loop.size(); ++m) {
            const Vec3& cur = p.vertices()[loop[m]];
            const Vec3& nxt = p.vertices()[loop[(m + 1) % loop.size()]];
            const double lc = frame.lambda(cur);
            const double ln = frame.lambda(nxt);
            if (lc <= 0.0) kept.push_back(cur);
            if ((lc < 0.0) != (ln < 0.0)) {
                const Vec3 x = cur + (lc / (lc - ln)) * (nxt - cur);
                kept.push_back(x);
                cap.push_back(x);
            }
        }
        if (kept.size() >= 3) {
            Vec3 va{};
            for (std::size_t m = 0; m < kept.size(); ++m) {
                va = va + cross(kept[m], kept[(m + 1) % kept.size()]);
            }
            vol3 += dot(kept[0] - c, 0.5 * va);
        }
    }
    if (cap.size() >= 3) {
        // Sort by angle about the cap centroid, CCW about the plane normal,
        // so the cap's Newell area points out of the kept region.
        Vec3 m{};
        for (const Vec3& x : cap) m = m + x;
        m = m / static_cast<double>(cap.size());
        Vec3 e1 = cap[0] - m;
        e1 = e1 - dot(e1, frame.normal) * frame.normal;
        if (norm(e1) > 0.0) {
            e1 = normalized(e1);
            const Vec3 e2 = cross(frame.normal, e1);
            std::sort(cap.begin(), cap.end(), [&](const Vec3& a, const Vec3& b) {
                return std::atan2(dot(a - m, e2), dot(a - m, e1)) <
                       std::atan2(dot(b - m, e2), dot(b - m, e1));
            });
            Vec3 va{};
            for (std::size_t i = 0; i < cap.size(); ++i) {
                va = va + cross(cap[i], cap[(i + 1) % cap.size()]);
            }
            vol3 += dot(cap[0] - c, 0.5 * va);
        }
    }
    return vol3 / 3.0;
}

// --- Monte Carlo ----------------------------------------------------------

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_hits = 0;
};

// Point cloud sampled uniformly in the bounding box with the inside/outside
// classification done once; any number of half-space estimates can then be
// taken from the same cloud. Deterministic for a fixed (polyhedron, n, seed).
class McSampler {
  public:
    McSampler(const Polyhedron& p, std::size_t n, std::uint64_t seed) : n_samples_(n) {
        const auto [lo, hi] = p.bounding_box();
        const Vec3 ext = hi - lo;
        box_volume_ = ext.x * ext.y * ext.z;
        const double h = p.bbox_diagonal();

        // Cache face planes and the dominant axis for 2-D projection.
        struct FaceCache {
            Vec3 n;
            double offset;
            int drop;
            std::vector<double> u, v; // projected loop
        };
        std::vector<FaceCache> fc(p.face_count());
        for (std::size_t k = 0; k < p.face_count(); ++k) {
            const auto& loop = p.faces()[k];
            FaceCache& f = fc[k];
            f.n = p.face_geometry(k).normal;
            f.offset = dot(f.n, p.vertices()[loop[0]]);
            const double ax = std::abs(f.n.x), ay = std::abs(f.n.y), az = std::abs(f.n.z);
            f.drop = az >= ax && az >= ay ? 2 : (ay >= ax ? 1 : 0);
            f.u.reserve(loop.size());
            f.v.reserve(loop.size());
            for (int idx : loop) {
                const Vec3& q = p.vertices()[idx];
                switch (f.drop) {
                    case 0: f.u.push_back(q.y); f.v.push_back(q.z); break;
                    case 1: f.u.push_back(q.x); f.v.push_back(q.z); break;
                    default: f.u.push_back(q.x); f.v.push_back(q.y); break;
                }
            }
        }

        // Fixed irrational directions; later entries are used only when a cast
        // grazes an edge, vertex, or face plane.
        const Vec3 dirs[6] = {
            normalized({1.0, 0.318309886183790672, 0.367879441171442322}),
            normalized({0.367879441171442322, 1.0, 0.318309886183790672}),
            normalized({0.318309886183790672, 0.367879441171442322, 1.0}),
            normalized({-1.0, 0.577215664901532861, 0.434294481903251828}),
            normalized({0.434294481903251828, -1.0, 0.577215664901532861}),
            normalized({0.577215664901532861, 0.434294481903251828, -1.0}),
        };
        const double edge_tol = 1e-12 * h;

        // Crossing parity of the ray x + t*dir, t > 0; false in `ok` when the
        // ray passes too close to anything ambiguous.
        const auto cast = [&](const Vec3& x, const Vec3& dir, bool& ok) {
            ok = true;
            int crossings = 0;
            for (const FaceCache& f : fc) {
                const double denom = dot(f.n, dir);
                const double dist = f.offset - dot(f.n, x);
                if (std::abs(denom) < 1e-12) {
                    if (std::abs(dist) < edge_tol) { ok = false; return false; }
                    continue;
                }
                const double t = dist / denom;
                if (std::abs(t) < edge_tol) { ok = false; return false; } // on the surface
                if (t < 0.0) continue;
                const Vec3 q = x + t * dir;
                double qu, qv;
                switch (f.drop) {
                    case 0: qu = q.y; qv = q.z; break;
                    case 1: qu = q.x; qv = q.z; break;
                    default: qu = q.x; qv = q.y; break;
                }
                int cn = 0;
                const std::size_t np = f.u.size();
                for (std::size_t a = 0; a < np; ++a) {
                    const std::size_t b = (a + 1) % np;
                    if (std::abs(f.v[a] - qv) < edge_tol && std::abs(f.u[a] - qu) < 1e-6 * h) {
                        ok = false; return false; // grazing a vertex
                    }
                    if ((f.v[a] > qv) != (f.v[b] > qv)) {
                        const double xi = f.u[a] + (qv - f.v[a]) / (f.v[b] - f.v[a]) * (f.u[b] - f.u[a]);
                        if (std::abs(xi - qu) < edge_tol) { ok = false; return false; } // edge hit
                        if (xi > qu) ++cn;
                    }
                }
                crossings += cn & 1;
            }
            return (crossings & 1) != 0;
        };

        std::mt19937_64 rng(seed);
        const auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
        inside_.reserve(n / 2);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 x = {lo.x + ext.x * unit(), lo.y + ext.y * unit(), lo.z + ext.z * unit()};
            bool in = false;
            for (const Vec3& dir : dirs) {
                bool ok;
                in = cast(x, dir, ok);
                if (ok) break;
                in = false;
            }
            if (in) inside_.push_back(x);
        }
    }

    // Volume of {x in p : lambda(x) <= 0}.
    McEstimate estimate(const PlaneFrame& frame) const {
        std::size_t hits = 0;
        for (const Vec3& x : inside_) {
            if (frame.lambda(x) <= 0.0) ++hits;
        }
        return finish(hits);
    }

    // Volume of the whole polyhedron.
    McEstimate estimate_total() const { return finish(inside_.size()); }

  private:
    McEstimate finish(std::size_t hits) const {
        const double n = static_cast<double>(n_samples_);
        const double frac = static_cast<double>(hits) / n;
        McEstimate e;
        e.value = frac * box_volume_;
        e.std_error = std::sqrt(frac * (1.0 - frac) / n) * box_volume_;
        e.n_samples = n_samples_;
        e.n_hits = hits;
        return e;
    }

    std::vector<Vec3> inside_;
    std::size_t n_samples_;
    double box_volume_;
};

inline McEstimate monte_carlo_volume(const Polyhedron& p, const PlaneFrame& frame,
                                     std::size_t n_samples, std::uint64_t seed) {
    return McSampler(p, n_samples, seed).estimate(frame);
}

} // namespace plic
