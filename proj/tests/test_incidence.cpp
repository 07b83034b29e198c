#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "inclab/configs.hpp"
#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/incidence.hpp"
#include "inclab/rational.hpp"

using namespace inclab;

namespace {
std::vector<Direction> base4_directions() {
    Config f4 = gen_furstenberg({2, 4, rat(1)});
    std::set<std::vector<long>> seen;
    std::vector<Direction> dirs;
    for (const auto& l : f4.lines) {
        std::vector<long> key;
        for (const auto& c : l.dir.v) key.push_back(c.get_si());
        if (seen.insert(key).second) dirs.push_back(l.dir);
    }
    return dirs;
}
} // namespace

TEST_CASE("exact incidence counts on the base-2 configuration") {
    Config cfg = gen_furstenberg({2, 2, rat(1)});
    IncidenceReport rep = count_incidences(cfg);
    CHECK(rep.total == 12);
    CHECK(rep.min_per_line == 3);
    CHECK(rep.max_per_line == 3);
    REQUIRE(rep.per_line.size() == 4);
    for (long c : rep.per_line) CHECK(c == 3);
}

TEST_CASE("prefilter and execution mode change nothing") {
    Config cfg = gen_furstenberg({2, 4, rat(1)});
    IncidenceReport plain = count_incidences(cfg, Exec::parallel, false);
    IncidenceReport pre = count_incidences(cfg, Exec::parallel, true);
    IncidenceReport serial = count_incidences(cfg, Exec::serial, false);
    IncidenceReport serial_pre = count_incidences(cfg, Exec::serial, true);
    CHECK(plain.total == 176);
    CHECK(pre.per_line == plain.per_line);
    CHECK(serial.per_line == plain.per_line);
    CHECK(serial_pre.per_line == plain.per_line);
}

TEST_CASE("ray distance is the sign-blind chord") {
    CHECK(ray_distance(IntVec{Int(2), Int(0)}, IntVec{Int(-1), Int(0)}) == 0.0);
    CHECK(ray_distance(IntVec{Int(1), Int(0)}, IntVec{Int(0), Int(1)}) ==
          doctest::Approx(1.4142135623730951).epsilon(1e-15));
    CHECK(ray_distance(IntVec{Int(1), Int(0)}, IntVec{Int(1), Int(1)}) ==
          doctest::Approx(0.76536686473017945).epsilon(1e-15));
    // rational overload agrees with the integer one
    CHECK(ray_distance(RatVec{rat(1, 3), rat(0)}, RatVec{rat(5), rat(5)}) ==
          ray_distance(IntVec{Int(1), Int(0)}, IntVec{Int(1), Int(1)}));
}

TEST_CASE("ray distance is bit-invariant under rational rotation") {
    auto dirs = base4_directions();
    REQUIRE(dirs.size() == 16);
    RatMat R = rational_rotation(random_skew(2, 7));
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            RatVec u(2), v(2), ru(2), rv(2);
            for (int k = 0; k < 2; ++k) {
                u[k] = Rational(dirs[i].v[k]);
                v[k] = Rational(dirs[j].v[k]);
            }
            ru = mat_apply(R, u);
            rv = mat_apply(R, v);
            // bitwise: the doubles must match exactly, not approximately
            CHECK(ray_distance(u, v) == ray_distance(ru, rv));
        }
}

TEST_CASE("direction density report on the base-4 direction family") {
    auto dirs = base4_directions();
    DensityReport rep = direction_density(dirs, 1.2, Region::sphere(), 4000, 1);
    CHECK(rep.max_gap == doctest::Approx(1.1241849875785226).epsilon(1e-12));
    CHECK(rep.probe_mesh == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(rep.pass);
    CHECK(rep.probes == 4000);
    CHECK(rep.region == "sphere");
    CHECK(rep.max_gap <= rep.epsilon);
    // the same family is not 0.9-dense
    DensityReport tight = direction_density(dirs, 0.9, Region::sphere(), 4000, 1);
    CHECK_FALSE(tight.pass);
    CHECK(tight.max_gap == rep.max_gap); // epsilon only moves the verdict
}

TEST_CASE("direction density over a slope box region") {
    DensityReport rep = direction_density({canonical_direction(IntVec{Int(1), Int(0)})}, 0.5,
                                          Region::slopes({{rat(0), rat(1)}}), 200, 1);
    CHECK(rep.region == "slopes:[0/1,1/1]");
    CHECK(rep.max_gap == doctest::Approx(0.76422172959748169).epsilon(1e-12));
    CHECK_FALSE(rep.pass);
}

TEST_CASE("direction separation with exact witness") {
    auto dirs = base4_directions();
    SeparationReport rep = direction_separation(dirs, 0.03);
    CHECK(rep.separated);
    CHECK(rep.min_distance == doctest::Approx(0.034319596833479023).epsilon(1e-12));
    SeparationReport tight = direction_separation(dirs, 0.04);
    CHECK_FALSE(tight.separated);
    CHECK(tight.witness == std::pair<std::size_t, std::size_t>{3, 7});
    SeparationReport single =
        direction_separation({canonical_direction(IntVec{Int(1), Int(0)})}, 0.5);
    CHECK(single.separated); // no pair to violate
}

TEST_CASE("density needs at least one direction") {
    CHECK_THROWS_AS(direction_density({}, 0.5, Region::sphere(), 100, 1), EmptyDirections);
}

TEST_CASE("separation report is bit-invariant under rational rotation") {
    auto dirs = base4_directions();
    RatMat R = rational_rotation(random_skew(2, 7));
    std::vector<Direction> rot;
    for (const auto& d : dirs) {
        RatVec v(2);
        for (int k = 0; k < 2; ++k) v[k] = Rational(d.v[k]);
        rot.push_back(canonical_direction(mat_apply(R, v)));
    }
    SeparationReport a = direction_separation(dirs, 0.03);
    SeparationReport b = direction_separation(rot, 0.03);
    CHECK(a.min_distance == b.min_distance); // exact invariants, identical doubles
    CHECK(a.separated == b.separated);
    CHECK(a.witness == b.witness);
}

TEST_CASE("coplanar lines are found as a 2-flat") {
    std::vector<Line> ls;
    ls.push_back(canonicalize_line(RatVec{rat(0), rat(0), rat(0)}, IntVec{Int(1), Int(0), Int(0)}));
    ls.push_back(canonicalize_line(RatVec{rat(0), rat(0), rat(0)}, IntVec{Int(0), Int(1), Int(0)}));
    ls.push_back(
        canonicalize_line(RatVec{rat(0), rat(1, 2), rat(0)}, IntVec{Int(1), Int(1), Int(0)}));
    ls.push_back(canonicalize_line(RatVec{rat(0), rat(0), rat(1)}, IntVec{Int(1), Int(1), Int(1)}));
    FlatReport rep = max_rflat_concentration(ls, 2);
    CHECK(rep.max_count == 3); // the three z = 0 lines, not the off-plane one
    CHECK(rep.exact);
    CHECK(rep.r == 2);

    // two parallel lines plus a skew one: best coplanar bundle is the pair
    std::vector<Line> pair;
    pair.push_back(canonicalize_line(RatVec{rat(0), rat(0), rat(0)}, IntVec{Int(1), Int(0), Int(0)}));
    pair.push_back(canonicalize_line(RatVec{rat(0), rat(1), rat(0)}, IntVec{Int(1), Int(0), Int(0)}));
    pair.push_back(canonicalize_line(RatVec{rat(0), rat(0), rat(1)}, IntVec{Int(0), Int(1), Int(0)}));
    FlatReport two = max_rflat_concentration(pair, 2);
    CHECK(two.max_count == 2);
    CHECK(two.exact);
}
