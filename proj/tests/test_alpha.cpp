#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ariel/bb/alpha.hpp"
#include "ariel/sim/rng.hpp"

using namespace ariel;

TEST_CASE("score climbs by one per error and decays by K per quiet period") {
  AlphaCount a{0.0, 0.5, 3.0};
  a = alpha_update(a, Judgment::Error);
  CHECK(a.score == 1.0);
  a = alpha_update(a, Judgment::Error);
  CHECK(a.score == 2.0);
  a = alpha_update(a, Judgment::NoError);
  CHECK(a.score == 1.0);
  a = alpha_update(a, Judgment::NoError);
  CHECK(a.score == 0.5);
}

TEST_CASE("classification threshold is inclusive") {
  AlphaCount a{0.0, 1.0, 3.0};  // K=1: no decay, pure counter
  CHECK_FALSE(alpha_non_transient(a));
  a = alpha_update(a, Judgment::Error);
  a = alpha_update(a, Judgment::Error);
  CHECK_FALSE(alpha_non_transient(a));
  a = alpha_update(a, Judgment::Error);
  CHECK(alpha_non_transient(a));  // exactly T
}

TEST_CASE("spaced errors with K=0.9 stay below T=3") {
  // One error every four quiet periods, forever conservative.
  AlphaCount a{0.0, 0.9, 3.0};
  for (int burst = 0; burst < 200; ++burst) {
    a = alpha_update(a, Judgment::Error);
    CHECK(a.score < 3.0);
    for (int q = 0; q < 4; ++q) a = alpha_update(a, Judgment::NoError);
  }
}

TEST_CASE("three errors in one period cross T=3") {
  AlphaCount a{0.0, 0.9, 3.0};
  a = alpha_update(a, Judgment::Error);
  a = alpha_update(a, Judgment::Error);
  a = alpha_update(a, Judgment::Error);
  CHECK(alpha_non_transient(a));
}

// Closed form of the judgment recurrence: every error contributes 1,
// decayed by K once per no-error judgment that follows it.
static double recurrence_oracle(const std::vector<Judgment>& stream, double K,
                                std::size_t upto) {
  double s = 0.0;
  for (std::size_t i = 0; i < upto; ++i) {
    if (stream[i] != Judgment::Error) continue;
    int quiet_after = 0;
    for (std::size_t j = i + 1; j < upto; ++j)
      if (stream[j] == Judgment::NoError) ++quiet_after;
    s += std::pow(K, quiet_after);
  }
  return s;
}

TEST_CASE("random judgment streams match the closed-form oracle") {
  SplitMix64 rng{0x50C0FFEEu};
  for (int trial = 0; trial < 200; ++trial) {
    double K = 0.05 + 0.9 * rng.uniform01();
    double T = 1.0 + 5.0 * rng.uniform01();
    int len = 1 + static_cast<int>(rng.next() % 50);

    std::vector<Judgment> stream;
    for (int i = 0; i < len; ++i)
      stream.push_back(rng.uniform01() < 0.5 ? Judgment::Error
                                             : Judgment::NoError);

    AlphaCount a{0.0, K, T};
    for (int i = 0; i < len; ++i) {
      a = alpha_update(a, stream[i]);
      double want = recurrence_oracle(stream, K, i + 1);
      INFO("trial " << trial << " step " << i << " K=" << K);
      if (want == 0.0)
        CHECK(a.score == 0.0);
      else
        CHECK(std::abs(a.score - want) <= 1e-12 * want);
      // the classifier is exactly score >= T, nothing fuzzier
      CHECK(alpha_non_transient(a) == (a.score >= T));
      CHECK(alpha_non_transient(a) == (want >= T));
    }
  }
}

// Closed form of the timestamp realization: an error in period p, observed
// from period q, contributes K^(q-p).
static double impulse_oracle(const std::vector<double>& error_times, double K,
                             double now, double P) {
  double s = 0.0;
  auto period = [&](double t) { return std::floor(t / P); };
  for (double t : error_times) s += std::pow(K, period(now) - period(t));
  return s;
}

TEST_CASE("grid decay matches the impulse closed form on random histories") {
  SplitMix64 rng{0xA1FA0001u};
  const double P = 100.0;
  for (int trial = 0; trial < 200; ++trial) {
    double K = 0.05 + 0.9 * rng.uniform01();
    int n = 1 + static_cast<int>(rng.next() % 50);

    AlphaState st;
    st.count.K = K;
    std::vector<double> times;
    double t = rng.uniform01() * P;
    for (int i = 0; i < n; ++i) {
      times.push_back(t);
      st.error_at(t, P);
      t += rng.uniform01() * 5.0 * P;  // same period or several later
    }
    double now = t + rng.uniform01() * 10.0 * P;
    double want = impulse_oracle(times, K, now, P);
    double got = st.effective_score(now, P);
    INFO("trial " << trial << " K=" << K << " n=" << n);
    CHECK(std::abs(got - want) <= 1e-12 * want);
  }
}

TEST_CASE("untouched state scores zero forever") {
  AlphaState st;
  CHECK(st.effective_score(1e9, 100.0) == 0.0);
}

TEST_CASE("decay only applies across whole period boundaries") {
  AlphaState st;
  st.count.K = 0.5;
  st.error_at(50.0, 100.0);  // period 0
  // still inside period 0: no decay yet
  CHECK(st.effective_score(99.0, 100.0) == 1.0);
  // one boundary crossed
  CHECK(st.effective_score(150.0, 100.0) == 0.5);
  // three boundaries crossed
  CHECK(st.effective_score(350.0, 100.0) == 0.125);
}

TEST_CASE("two errors in the same period do not decay between them") {
  AlphaState st;
  st.count.K = 0.5;
  st.error_at(10.0, 100.0);
  st.error_at(90.0, 100.0);
  CHECK(st.effective_score(95.0, 100.0) == 2.0);
}
