#include <doctest.h>

#include "pcross/systems.hpp"

using namespace pcross;

TEST_CASE("presets parse, validate, and expose the documented data") {
  const SystemDescription w1 = preset_system("W1");
  CHECK(w1.group.order() == 2);
  CHECK(w1.shape.dims == std::vector<int>({1, 1}));
  CHECK(w1.action.range(1).support == std::vector<int>({1}));
  CHECK(validate_partial_action(w1.action).valid);
  CHECK(check_invariant_trace(w1.action, w1.trace).invariant);

  const SystemDescription trivial = preset_system("trivial");
  CHECK(trivial.shape.dims == std::vector<int>({2}));
  CHECK(validate_partial_action(trivial.action).valid);

  const SystemDescription restr = preset_system("restriction-example");
  CHECK(restr.shape.dims == std::vector<int>({1}));
  CHECK(restr.action.range(1).support.empty());
  CHECK(restr.action.range(2).support.empty());
  CHECK(validate_partial_action(restr.action).valid);

  CHECK_THROWS_AS(preset_system("nope"), std::invalid_argument);
}

TEST_CASE("generator soundness across seeds") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SystemDescription sys = generate_random_system(seed);
    CHECK(sys.group.order() <= 8);
    CHECK(sys.shape.rep_dim() <= 6);
    CHECK(validate_partial_action(sys.action).valid);
    sys.trace.validate(sys.shape);
    CHECK(sys.trace.is_faithful());
    CHECK(check_invariant_trace(sys.action, sys.trace).invariant);
  }
}

TEST_CASE("generator determinism and budget degeneration") {
  const SystemDescription a = generate_random_system(0);
  const SystemDescription b = generate_random_system(0);
  CHECK(to_json(a).dump() == to_json(b).dump());

  const SystemDescription tiny = generate_random_system(5, {1, 6});
  CHECK(tiny.group.order() == 1);
  CHECK(validate_partial_action(tiny.action).valid);
}

TEST_CASE("system JSON round trip") {
  for (std::uint64_t seed : {1ull, 8ull, 33ull}) {
    const SystemDescription sys = generate_random_system(seed);
    const Json j = to_json(sys);
    const SystemDescription parsed = system_from_json(j);
    CHECK(parsed.group.table() == sys.group.table());
    CHECK(parsed.shape == sys.shape);
    CHECK(parsed.trace.weights == sys.trace.weights);
    for (int g = 0; g < sys.group.order(); ++g) {
      CHECK(parsed.action.domain(g) == sys.action.domain(g));
      for (int i : sys.action.domain(g).support) {
        CHECK(parsed.action.map_block(g, i) == sys.action.map_block(g, i));
        const int j2 = sys.action.map_block(g, i);
        CHECK((parsed.action.unitary(g, j2) - sys.action.unitary(g, j2)).cwiseAbs().maxCoeff() <
              1e-15);
      }
    }
    // Serialization is stable through a parse cycle.
    CHECK(to_json(parsed).dump() == j.dump());
  }
}

TEST_CASE("named group constructors in JSON") {
  const Json cyclic = {{"name", "cyclic"}, {"n", 5}};
  CHECK(group_from_json(cyclic).order() == 5);
  const Json sym = {{"name", "symmetric"}, {"n", 3}};
  CHECK(group_from_json(sym).order() == 6);
  const Json bad = {{"name", "dihedral"}, {"n", 3}};
  CHECK_THROWS_AS(group_from_json(bad), std::invalid_argument);
}

TEST_CASE("crossed element and h JSON round trips") {
  const SystemDescription sys = preset_system("W1");
  const CrossedProduct cp(sys.action);
  Rng rng(91);
  Vector coords(cp.dim());
  for (int i = 0; i < cp.dim(); ++i) coords(i) = rng.complex_normal();
  const CrossedElement x = cp.element(coords);
  const CrossedElement back = crossed_element_from_json(to_json(x), cp);
  CHECK(cp_distance(x, back) < 1e-15);

  const CenterValuedPDFunction h = random_pd_function(rng, sys.action);
  const CenterValuedPDFunction hb = h_from_json(to_json(h), sys.action);
  for (int g = 0; g < sys.group.order(); ++g)
    for (int i = 0; i < sys.shape.block_count(); ++i)
      CHECK(std::abs(h.scalars(g)[static_cast<std::size_t>(i)] -
                     hb.scalars(g)[static_cast<std::size_t>(i)]) < 1e-15);
}

TEST_CASE("random chain generators produce valid chains") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (bool with_actions : {false, true}) {
      const ChainDescription chain = generate_random_chain(seed, 4, with_actions);
      REQUIRE(chain.stages.size() == 4);
      REQUIRE(chain.embeddings.size() == 3);
      for (std::size_t s = 0; s < chain.stages.size(); ++s) {
        chain.stages[s].trace.validate(chain.stages[s].shape);
        CHECK(chain.stages[s].trace.is_faithful());
        if (with_actions) {
          REQUIRE(chain.stages[s].action.has_value());
          CHECK(validate_partial_action(*chain.stages[s].action).valid);
          CHECK(check_invariant_trace(*chain.stages[s].action, chain.stages[s].trace).invariant);
        }
      }
      for (std::size_t s = 0; s + 1 < chain.stages.size(); ++s)
        CHECK(validate_embedding(chain.embeddings[s], chain.stages[s], chain.stages[s + 1]).valid);
    }
  }
}

TEST_CASE("equivariant UCP generator produces certified equivariant maps") {
  Rng rng(92);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SystemDescription sys = generate_random_system(seed);
    const GnsSpace space = make_algebra_gns(sys.shape, sys.trace);
    const LinearMapOnAlgebra phi = random_equivariant_ucp(rng, sys.action, sys.trace);
    CHECK(check_ucp(space, phi).pass());
    CHECK(check_tau_decreasing(space, phi).pass);
    CHECK(equivariance_deviation(sys.action, phi) <= 1e-9);
  }
}
