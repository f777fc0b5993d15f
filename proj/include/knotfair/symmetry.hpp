#ifndef KNOTFAIR_SYMMETRY_HPP
#define KNOTFAIR_SYMMETRY_HPP

#include <algorithm>
#include <numbers>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/knot.hpp"

namespace knotfair {

// Symmetry constraints on node indices (1-based):
//  - mver: pairs mirrored across the vertical axis x=0
//  - xver: nodes pinned onto the axis
//  - mrot: orbits mapped onto themselves by rotation through 2*pi/k about the
//    origin, listed in rotation order
// Inputs are expected to be centered (axis through the origin); the CLI
// centers on the node centroid before applying a spec.
struct SymmetrySpec {
    std::vector<std::pair<int, int>> mver;
    std::vector<int> xver;
    std::vector<std::vector<int>> mrot;
    int rotation_order = 0;

    bool trivial() const { return mver.empty() && xver.empty() && mrot.empty(); }
};

namespace symdetail {

inline Vec2 mirror_point(Vec2 p) { return {-p.x, p.y}; }

// Forward handle of the mirror-image node: reflection reverses traversal, so
// node a's forward handle maps onto node b's backward handle reflected.
inline Vec2 mirror_handle(Vec2 node_b, Vec2 handle_a) {
    return {2.0 * node_b.x + handle_a.x, 2.0 * node_b.y - handle_a.y};
}

// Rotation carrying an orbit representative to member j (angle 2*pi*j/k).
inline Vec2 orbit_rotate(Vec2 p, int j, int k) {
    const double ang = 2.0 * std::numbers::pi_v<double> * j / k;
    const double c = std::cos(ang), s = std::sin(ang);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline Vec2 orbit_rotate_back(Vec2 p, int j, int k) {
    const double ang = 2.0 * std::numbers::pi_v<double> * j / k;
    const double c = std::cos(ang), s = std::sin(ang);
    return {c * p.x + s * p.y, -s * p.x + c * p.y};
}

enum class Role { Free, MverA, MverB, Xver, OrbitRep, OrbitImage };

// Resolved constraint layout: which nodes carry free parameters and how the
// rest are constructed from them.
struct Plan {
    int n = 0;
    std::vector<Role> role;              // per node, 0-based
    std::vector<int> param_offset;       // -1 when the node carries none
    std::vector<int> param_count;        // 4, 2 or 0
    std::vector<std::vector<int>> orbits;  // canonicalized, 0-based, rep first
    std::vector<std::pair<int, int>> pairs;  // 0-based (a, b)
    std::vector<int> axis_nodes;         // 0-based
    int k = 0;
    int dim = 0;
    bool rotational = false;
};

inline Plan make_plan(const SymmetrySpec& spec, int n) {
    Plan plan;
    plan.n = n;
    plan.role.assign(n, Role::Free);
    plan.param_offset.assign(n, -1);
    plan.param_count.assign(n, 0);

    auto check_index = [&](int idx, const char* what) {
        if (idx < 1 || idx > n)
            throw Error(Errc::InconsistentSpec, std::string(what) + " index " +
                                                    std::to_string(idx) + " outside 1.." +
                                                    std::to_string(n));
        return idx - 1;
    };

    // mirror membership
    std::vector<int> pair_of(n, -1);
    for (std::size_t i = 0; i < spec.mver.size(); ++i) {
        const int a = check_index(spec.mver[i].first, "mver");
        const int b = check_index(spec.mver[i].second, "mver");
        if (a == b) throw Error(Errc::InconsistentSpec, "mver pair maps a node to itself");
        for (int v : {a, b}) {
            if (pair_of[v] != -1)
                throw Error(Errc::InconsistentSpec,
                            "node " + std::to_string(v + 1) + " appears in two mver pairs");
            pair_of[v] = static_cast<int>(i);
        }
        plan.pairs.emplace_back(a, b);
    }
    std::vector<bool> on_axis(n, false);
    for (int raw : spec.xver) {
        const int v = check_index(raw, "xver");
        if (pair_of[v] != -1)
            throw Error(Errc::InconsistentSpec,
                        "node " + std::to_string(v + 1) + " is both xver and in an mver pair");
        if (on_axis[v])
            throw Error(Errc::InconsistentSpec, "duplicate xver node " + std::to_string(v + 1));
        on_axis[v] = true;
        plan.axis_nodes.push_back(v);
    }

    // rotation orbits
    if (!spec.mrot.empty()) {
        plan.rotational = true;
        plan.k = spec.rotation_order > 0 ? spec.rotation_order
                                         : static_cast<int>(spec.mrot.front().size());
        if (plan.k < 2) throw Error(Errc::InconsistentSpec, "rotation order must be >= 2");
        std::vector<int> orbit_of(n, -1);
        for (const auto& raw_orbit : spec.mrot) {
            if (static_cast<int>(raw_orbit.size()) != plan.k)
                throw Error(Errc::InconsistentSpec, "all mrot orbits must have length " +
                                                        std::to_string(plan.k));
            std::vector<int> orbit;
            for (int raw : raw_orbit) {
                const int v = check_index(raw, "mrot");
                if (orbit_of[v] != -1)
                    throw Error(Errc::InconsistentSpec,
                                "node " + std::to_string(v + 1) + " appears in two orbits");
                orbit_of[v] = static_cast<int>(plan.orbits.size());
                orbit.push_back(v);
            }
            // rotate the cycle so a mirror-constrained member, if any, is the
            // representative; more than one such member is not representable
            int anchor = -1;
            for (std::size_t j = 0; j < orbit.size(); ++j) {
                if (pair_of[orbit[j]] != -1 || on_axis[orbit[j]]) {
                    if (anchor != -1)
                        throw Error(Errc::InconsistentSpec,
                                    "orbit has several mirror-constrained members");
                    anchor = static_cast<int>(j);
                }
            }
            if (anchor > 0) std::rotate(orbit.begin(), orbit.begin() + anchor, orbit.end());
            plan.orbits.push_back(std::move(orbit));
        }
        for (const auto& [a, b] : plan.pairs) {
            const bool a_img = orbit_of[a] != -1 && plan.orbits[orbit_of[a]][0] != a;
            const bool b_img = orbit_of[b] != -1 && plan.orbits[orbit_of[b]][0] != b;
            if (a_img || b_img)
                throw Error(Errc::InconsistentSpec,
                            "mver pair members must be orbit representatives");
            if (orbit_of[a] != -1 && orbit_of[a] == orbit_of[b])
                throw Error(Errc::InconsistentSpec,
                            "mver pair within a single orbit is not supported");
        }
    } else if (spec.rotation_order > 1) {
        throw Error(Errc::InconsistentSpec, "rotation_order set but no mrot orbits given");
    }

    // roles
    for (const auto& orbit : plan.orbits) {
        plan.role[orbit[0]] = Role::OrbitRep;
        for (std::size_t j = 1; j < orbit.size(); ++j) plan.role[orbit[j]] = Role::OrbitImage;
    }
    for (const auto& [a, b] : plan.pairs) {
        if (plan.role[a] == Role::Free) plan.role[a] = Role::MverA;
        if (plan.role[b] == Role::Free) plan.role[b] = Role::MverB;
    }
    for (int v : plan.axis_nodes)
        if (plan.role[v] == Role::Free) plan.role[v] = Role::Xver;

    // parameter layout: orbit representatives always carry full coordinates
    // (mirror relations between representatives are resolved by projection,
    // which leaves the parameterization redundant but the expansion exact)
    int offset = 0;
    for (int v = 0; v < n; ++v) {
        int count = 0;
        switch (plan.role[v]) {
            case Role::Free:
            case Role::MverA:
            case Role::OrbitRep: count = 4; break;
            case Role::Xver: count = 2; break;  // node y, handle x
            case Role::MverB:
            case Role::OrbitImage: count = 0; break;
        }
        plan.param_offset[v] = count > 0 ? offset : -1;
        plan.param_count[v] = count;
        offset += count;
    }
    plan.dim = offset;
    return plan;
}

}  // namespace symdetail

// Free parameters of the symmetry-constrained configuration space.
struct ReducedVec {
    std::vector<double> values;
    SymmetrySpec spec;
    int n = 0;
};

inline int reduced_dimension(const SymmetrySpec& spec, int n) {
    return symdetail::make_plan(spec, n).dim;
}

// Reconstructs the full knot from free parameters. Every constraint in the
// spec holds exactly on the output: constrained coordinates are assigned from
// their sources with the same formulas symmetry_error() checks.
inline MinObj expand(const ReducedVec& r) {
    using namespace symdetail;
    const Plan plan = make_plan(r.spec, r.n);
    if (static_cast<int>(r.values.size()) != plan.dim)
        throw Error(Errc::BadLength, "reduced vector has " + std::to_string(r.values.size()) +
                                         " values, layout needs " + std::to_string(plan.dim));
    MinObj m;
    m.nodes.assign(r.n, {});
    m.handles.assign(r.n, {});

    for (int v = 0; v < plan.n; ++v) {
        const int o = plan.param_offset[v];
        if (plan.param_count[v] == 4) {
            m.nodes[v] = {r.values[o], r.values[o + 1]};
            m.handles[v] = {r.values[o + 2], r.values[o + 3]};
        } else if (plan.param_count[v] == 2) {
            m.nodes[v] = {0.0, r.values[o]};
            m.handles[v] = {r.values[o + 1], m.nodes[v].y};
        }
    }
    // axis projection of rotational representatives (their slots carry a full
    // 4 coordinates)
    for (int v : plan.axis_nodes) {
        if (plan.role[v] == Role::OrbitRep) {
            m.nodes[v].x = 0.0;
            m.handles[v].y = m.nodes[v].y;
        }
    }
    // mirror pairs: average into a, assign b from a
    for (const auto& [a, b] : plan.pairs) {
        if (plan.param_count[b] == 4) {  // redundant representative: fold b into a
            m.nodes[a] = {(m.nodes[a].x - m.nodes[b].x) * 0.5, (m.nodes[a].y + m.nodes[b].y) * 0.5};
            m.handles[a] = (m.handles[a] + mirror_handle(m.nodes[a], m.handles[b])) * 0.5;
        }
        m.nodes[b] = mirror_point(m.nodes[a]);
        m.handles[b] = mirror_handle(m.nodes[b], m.handles[a]);
    }
    // orbit propagation from (projected) representatives
    for (const auto& orbit : plan.orbits) {
        const int rep = orbit[0];
        for (std::size_t j = 1; j < orbit.size(); ++j) {
            m.nodes[orbit[j]] = orbit_rotate(m.nodes[rep], static_cast<int>(j), plan.k);
            m.handles[orbit[j]] = orbit_rotate(m.handles[rep], static_cast<int>(j), plan.k);
        }
    }
    return m;
}

// Projects a knot onto the free parameters: orbit members are rotated back
// and averaged, mirror pairs averaged, axis nodes dropped onto the axis.
inline ReducedVec reduce(const MinObj& m, const SymmetrySpec& spec) {
    using namespace symdetail;
    const Plan plan = make_plan(spec, m.size());
    ReducedVec r;
    r.spec = spec;
    r.n = m.size();
    r.values.assign(plan.dim, 0.0);

    std::vector<Point2> nodes = m.nodes;
    std::vector<Point2> handles = m.handles;
    for (const auto& orbit : plan.orbits) {
        Vec2 pn{0, 0}, ph{0, 0};
        for (std::size_t j = 0; j < orbit.size(); ++j) {
            pn += orbit_rotate_back(m.nodes[orbit[j]], static_cast<int>(j), plan.k);
            ph += orbit_rotate_back(m.handles[orbit[j]], static_cast<int>(j), plan.k);
        }
        nodes[orbit[0]] = pn / static_cast<double>(orbit.size());
        handles[orbit[0]] = ph / static_cast<double>(orbit.size());
    }
    for (const auto& [a, b] : plan.pairs) {
        if (plan.param_count[b] != 0) continue;  // representative pairs fold during expand
        const Vec2 pa{(nodes[a].x - nodes[b].x) * 0.5, (nodes[a].y + nodes[b].y) * 0.5};
        nodes[a] = pa;
        handles[a] = (handles[a] + mirror_handle(pa, handles[b])) * 0.5;
    }
    for (int v = 0; v < plan.n; ++v) {
        const int o = plan.param_offset[v];
        if (plan.param_count[v] == 4) {
            r.values[o] = nodes[v].x;
            r.values[o + 1] = nodes[v].y;
            r.values[o + 2] = handles[v].x;
            r.values[o + 3] = handles[v].y;
        } else if (plan.param_count[v] == 2) {
            r.values[o] = nodes[v].y;
            r.values[o + 1] = handles[v].x;
        }
    }
    return r;
}

// Projection onto the exactly-symmetric configuration space.
inline MinObj symmetrize(const MinObj& m, const SymmetrySpec& spec) {
    return expand(reduce(m, spec));
}

// Worst violation over the spec's constraints: distance between each
// constrained coordinate and the value its source prescribes. Exactly zero on
// any output of expand().
inline double symmetry_error(const MinObj& m, const SymmetrySpec& spec) {
    using namespace symdetail;
    const Plan plan = make_plan(spec, m.size());
    double err = 0.0;
    auto note = [&](double e) { err = std::max(err, e); };
    for (const auto& [a, b] : plan.pairs) {
        note(dist(m.nodes[b], mirror_point(m.nodes[a])));
        note(dist(m.handles[b], mirror_handle(m.nodes[b], m.handles[a])));
    }
    for (int v : plan.axis_nodes) {
        note(std::abs(m.nodes[v].x));
        note(std::abs(m.handles[v].y - m.nodes[v].y));
    }
    for (const auto& orbit : plan.orbits) {
        const int rep = orbit[0];
        for (std::size_t j = 1; j < orbit.size(); ++j) {
            note(dist(m.nodes[orbit[j]], orbit_rotate(m.nodes[rep], static_cast<int>(j), plan.k)));
            note(dist(m.handles[orbit[j]],
                      orbit_rotate(m.handles[rep], static_cast<int>(j), plan.k)));
        }
    }
    return err;
}

}  // namespace knotfair

#endif  // KNOTFAIR_SYMMETRY_HPP
