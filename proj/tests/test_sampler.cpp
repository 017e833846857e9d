#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "lozenge/mcmc.hpp"
#include "lozenge/sampler.hpp"
#include "lozenge/stats.hpp"
#include "lozenge/weights.hpp"
#include "oracles.hpp"

using namespace lozenge;

TEST_CASE("unique-tiling domain gives the unique trajectory", "[sampler]") {
  std::vector<Vertex> v = {{Rational(0), Rational(0)},
                           {Rational(2), Rational(0)},
                           {Rational(3), Rational(1)},
                           {Rational(3), Rational(1)},
                           {Rational(1), Rational(1)},
                           {Rational(0), Rational(0)},
                           {Rational(0), Rational(0)}};
  auto d = PolygonalDomain::from_vertices(1, v);
  ExactSampler s(d);
  auto t1 = s.sample(1, 0);
  auto t2 = s.sample(99, 7);
  CHECK(t1.hash() == t2.hash());
}

TEST_CASE("exact sampler step law sums to one in integer arithmetic", "[sampler]") {
  auto d = PolygonalDomain::hexagon(2, 2, 2, 1);
  ExactSampler s(d);
  for (uint64_t i = 0; i < 20; ++i) {
    auto tr = s.sample(5, i);
    for (const auto& c : tr.configs)
      if (c.t < d.T_lattice()) CHECK(s.step_weights_sum_exactly(c));
  }
}

TEST_CASE("exact sampler is uniform on the 1x1x2 hexagon", "[sampler][slow]") {
  auto d = PolygonalDomain::hexagon(1, 1, 2, 1);
  auto all = oracle::all_trajectories(d);
  REQUIRE(all.size() == 3);
  ExactSampler s(d);
  CHECK(s.total_count() == 3);

  std::map<uint64_t, size_t> id_by_hash;
  for (size_t i = 0; i < all.size(); ++i) {
    WalkTrajectory t;
    for (size_t tau = 0; tau < all[i].size(); ++tau)
      t.configs.push_back(ParticleConfig{(long long)tau, all[i][tau], 1});
    id_by_hash[t.hash()] = i;
  }

  const long long K = 30000;
  std::vector<long long> counts(3, 0);
  for (long long i = 0; i < K; ++i) {
    auto tr = s.sample(2024, (uint64_t)i);
    auto it = id_by_hash.find(tr.hash());
    REQUIRE(it != id_by_hash.end());
    ++counts[it->second];
  }
  auto chi = chi_square_uniformity(counts, K);
  CHECK(chi.p_value > 1e-3);
  double p = 1.0 / 3.0;
  double sigma = std::sqrt(p * (1 - p) * (double)K);
  for (long long c : counts) CHECK(std::abs((double)c - p * K) <= 3.0 * sigma);
}

TEST_CASE("trajectories are reproducible bit for bit", "[sampler]") {
  auto d = PolygonalDomain::hexagon(2, 2, 2, 1);
  ExactSampler s1(d), s2(d);
  for (uint64_t i = 0; i < 10; ++i) {
    auto a = s1.sample(42, i);
    auto b = s2.sample(42, i);
    REQUIRE(a.configs.size() == b.configs.size());
    for (size_t k = 0; k < a.configs.size(); ++k) CHECK(a.configs[k] == b.configs[k]);
  }
  auto a = s1.sample(42, 3);
  auto b = s1.sample(43, 3);
  CHECK(a.hash() != b.hash());
}

TEST_CASE("drifted step distribution basics", "[sampler]") {
  SECTION("single free particle is a fair coin") {
    ParticleConfig c{0, {0}, 4};
    auto dist = drifted_step_distribution(c, DriftedWalkWeights::free_walk());
    REQUIRE(dist.prob.size() == 2);
    CHECK(dist.prob[0] == Catch::Approx(0.5));
    CHECK(dist.prob[1] == Catch::Approx(0.5));
  }
  SECTION("adjacent particles block the colliding jump") {
    ParticleConfig c{0, {0, 1}, 4};
    auto dist = drifted_step_distribution(c, DriftedWalkWeights::free_walk());
    REQUIRE(dist.prob.size() == 4);
    CHECK(dist.prob[0b01] == 0.0);  // lower jumps onto upper
    double z = dist.prob[0b00] + dist.prob[0b10] + dist.prob[0b11];
    CHECK(z == Catch::Approx(1.0));
  }
  SECTION("generic two-particle table matches direct summation") {
    ParticleConfig c{0, {0, 3}, 4};
    DriftedWalkWeights w;
    w.varphi_plus = RationalFn::poly(Poly{{2.0, 0.5}});    // 2 + x/2
    w.varphi_minus = RationalFn::poly(Poly{{1.0, 0.25}});  // 1 + x/4
    w.psi_plus = Poly{{0.3}};
    w.kappa = PairPoly{{{0.0, 0.5}, {0.5, 0.0}}};  // (x+y)/2, symmetric
    auto dist = drifted_step_distribution(c, w);
    long long n = 4;
    auto phi_p = [&](double x) { return (2 + x / 2) * std::exp(0.3 / (double)n); };
    auto phi_m = [&](double x) { return 1 + x / 4; };
    double x0 = 0.0, x1 = 0.75;
    double v = x1 - x0;
    std::vector<double> a(4);
    a[0b00] = phi_m(x0) * phi_m(x1);
    a[0b01] = phi_p(x0) * phi_m(x1) * (v - 0.25) / v;
    a[0b10] = phi_m(x0) * phi_p(x1) * (v + 0.25) / v;
    a[0b11] = phi_p(x0) * phi_p(x1) * std::exp(((x0 + x1) / 2) / ((double)n * (double)n));
    double z = a[0] + a[1] + a[2] + a[3];
    for (int mask = 0; mask < 4; ++mask)
      CHECK(dist.prob[(size_t)mask] == Catch::Approx(a[(size_t)mask] / z).epsilon(1e-12));
  }
  SECTION("negative weight is rejected") {
    ParticleConfig c{0, {0}, 4};
    DriftedWalkWeights w;
    w.varphi_plus = RationalFn::poly(Poly{{-1.0}});
    CHECK_THROWS_AS(drifted_step_distribution(c, w), Error);
  }
}

TEST_CASE("drifted law with counting-ratio drift equals the exact table", "[sampler]") {
  // single-walk instances: phi+(x) = N_{t+1}(x+1), phi-(x) = N_{t+1}(x)
  // reproduces the exact one-step law identically
  auto d = PolygonalDomain::hexagon(1, 2, 3, 1);
  ExactSampler s(d);
  long long T = d.T_lattice();
  int checked = 0;
  for (long long tau = 0; tau < T; ++tau) {
    const auto& table = s.tables().at(tau);
    const auto& next = s.tables().at(tau + 1);
    for (const auto& [key, val] : table) {
      REQUIRE(key.size() == 1);
      auto find = [&](int32_t x) {
        auto it = next.find(std::vector<int32_t>{x});
        return it == next.end() ? BigInt(0) : it->second;
      };
      BigInt stay = find(key[0]);
      BigInt jump = find(key[0] + 1);
      if (stay == 0 || jump == 0) continue;  // forced moves at the walls
      double pstay_exact =
          stay.convert_to<double>() / (stay.convert_to<double>() + jump.convert_to<double>());
      ParticleConfig c{tau, {key[0]}, 1};
      DriftedWalkWeights w;
      w.varphi_plus = RationalFn::constant(jump.convert_to<double>());
      w.varphi_minus = RationalFn::constant(stay.convert_to<double>());
      auto dist = drifted_step_distribution(c, w);
      CHECK(dist.prob[0] == Catch::Approx(pstay_exact).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked > 5);

  // two-walk instance: phi ratios and a constant kappa solved from the
  // exact table reproduce it exactly through the drifted normalizer
  auto d2 = PolygonalDomain::hexagon(2, 2, 2, 1);
  ExactSampler s2(d2);
  ParticleConfig c{1, {0, 2}, 1};
  const auto& next = s2.tables().at(2);
  auto find2 = [&](int32_t a, int32_t b) {
    auto it = next.find(std::vector<int32_t>{a, b});
    return it == next.end() ? 0.0 : it->second.convert_to<double>();
  };
  double w00 = find2(0, 2), w01 = find2(0, 3), w10 = find2(1, 2), w11 = find2(1, 3);
  REQUIRE(w00 > 0);
  REQUIRE(w11 > 0);
  double x1 = 0, x2 = 2;
  double v = x2 - x1;
  double vr10 = (v - 1) / v, vr01 = (v + 1) / v, vr11 = 1.0;
  double dp1 = (w10 / w00) / vr10;  // jump weight of the lower walk
  double dp2 = (w01 / w00) / vr01;  // jump weight of the upper walk
  double slope = (dp2 - dp1) / (x2 - x1);
  DriftedWalkWeights w;
  w.varphi_plus = RationalFn::poly(Poly{{dp1 - slope * x1, slope}});
  w.varphi_minus = RationalFn::constant(1.0);
  double kap = std::log((w11 / w00) / (vr11 * dp1 * dp2));  // n = 1
  w.kappa = PairPoly{{{kap}}};
  auto dist = drifted_step_distribution(c, w);
  double z = w00 + w01 + w10 + w11;
  CHECK(dist.prob[0b00] == Catch::Approx(w00 / z).epsilon(1e-10));
  CHECK(dist.prob[0b01] == Catch::Approx(w10 / z).epsilon(1e-10));
  CHECK(dist.prob[0b10] == Catch::Approx(w01 / z).epsilon(1e-10));
  CHECK(dist.prob[0b11] == Catch::Approx(w11 / z).epsilon(1e-10));
}

TEST_CASE("mcmc canonical state and audit", "[sampler]") {
  auto d = PolygonalDomain::hexagon(1, 1, 1, 1);
  WalkLattice lat(d);
  FlipChain chain(lat, 7);
  CHECK(chain.count_flippable() == 1);  // single cube in the unit hexagon
  auto st = chain.sweep();
  CHECK(st.flippable == 1);
}

TEST_CASE("mcmc visits both unit-hexagon tilings uniformly", "[sampler][slow]") {
  auto d = PolygonalDomain::hexagon(1, 1, 1, 1);
  WalkLattice lat(d);
  FlipChain chain(lat, 11);
  long long hits = 0;
  const long long sweeps = 20000;
  for (long long swp = 0; swp < sweeps; ++swp) {
    chain.sweep();
    hits += (chain.state()[1][0] == 1) ? 1 : 0;
  }
  double p = (double)hits / (double)sweeps;
  CHECK(std::abs(p - 0.5) < 0.02);
}

TEST_CASE("mcmc stationary distribution is uniform (chi-square)", "[sampler][slow]") {
  for (auto dom : {PolygonalDomain::hexagon(1, 1, 2, 1), PolygonalDomain::hexagon(2, 2, 2, 1)}) {
    auto all = oracle::all_trajectories(dom);
    std::map<uint64_t, size_t> id_by_hash;
    for (size_t i = 0; i < all.size(); ++i) {
      WalkTrajectory t;
      for (size_t tau = 0; tau < all[i].size(); ++tau)
        t.configs.push_back(ParticleConfig{(long long)tau, all[i][tau], 1});
      id_by_hash[t.hash()] = i;
    }
    WalkLattice lat(dom);
    FlipChain chain(lat, 1234);
    chain.run(1000);  // burn-in
    std::vector<long long> counts(all.size(), 0);
    const long long K = 100000;
    const int thin = 3;
    for (long long i = 0; i < K; ++i) {
      for (int t = 0; t < thin; ++t) chain.sweep();
      auto it = id_by_hash.find(chain.trajectory().hash());
      REQUIRE(it != id_by_hash.end());
      ++counts[it->second];
    }
    auto chi = chi_square_uniformity(counts, K);
    INFO("tilings " << all.size() << " chi2 " << chi.statistic << " p " << chi.p_value);
    CHECK(chi.p_value > 1e-3);
  }
}

TEST_CASE("mcmc trajectories stay valid on a creation domain", "[sampler]") {
  std::vector<Vertex> verts = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)},
                               {Rational(2), Rational(1)}, {Rational(2), Rational(2)},
                               {Rational(4), Rational(2)}, {Rational(5), Rational(3)},
                               {Rational(5), Rational(5)}, {Rational(2), Rational(5)},
                               {Rational(0), Rational(3)}};
  auto d = PolygonalDomain::from_vertices(1, verts);
  WalkLattice lat(d);
  FlipChain chain(lat, 3);
  for (int swp = 0; swp < 500; ++swp) chain.sweep();
  for (long long tau = 0; tau < d.T_lattice(); ++tau)
    CHECK(d.config_valid(chain.config_at(tau)));
}

TEST_CASE("mcmc ergodicity: all tilings of the staircase are reached", "[sampler][slow]") {
  std::vector<Vertex> verts = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)},
                               {Rational(2), Rational(1)}, {Rational(2), Rational(2)},
                               {Rational(4), Rational(2)}, {Rational(5), Rational(3)},
                               {Rational(5), Rational(5)}, {Rational(2), Rational(5)},
                               {Rational(0), Rational(3)}};
  auto d = PolygonalDomain::from_vertices(1, verts);
  auto all = oracle::all_trajectories(d);
  std::map<uint64_t, long long> seen;
  WalkLattice lat(d);
  FlipChain chain(lat, 99);
  for (int swp = 0; swp < 60000; ++swp) {
    chain.sweep();
    ++seen[chain.trajectory().hash()];
  }
  CHECK(seen.size() == all.size());
}
