#include <doctest.h>

#include "csibreath/chansim.hpp"
#include "csibreath/pipeline.hpp"
#include "oracles.hpp"

using namespace csibreath;

namespace {

CsiSampleSet room(double rate, std::uint64_t seed, std::optional<double> snr = 30.0) {
  RoomParams p;
  p.rate_hz = rate;
  p.seed = seed;
  p.snr_db = snr;
  return simulate(make_room_scenario(p));
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("system catalogue") {
    const auto systems = list_systems();
    REQUIRE(systems.size() == 6);
    for (const auto& cfg : systems) {
      CHECK(cfg.q_threshold == 0.18);
      CHECK(cfg.boi == BoiConfig{0.2, 0.5});
      CHECK(cfg.psd_resolution_hz == 0.001);
      CHECK(cfg.tau_max_s.has_value() == (cfg.name == "complexbeat-csi-df"));
      CHECK_NOTHROW(cfg.validate());
    }
    CHECK(*SystemConfig::defaults("complexbeat-csi-df").tau_max_s == 50e-9);
    CHECK(SystemConfig::defaults("phasebeat").uses_peak_detect());
    CHECK_FALSE(SystemConfig::defaults("phasebeat-mad-psd").uses_peak_detect());
    CHECK(SystemConfig::defaults("complexbeat-cir").is_complexbeat());
  }

  TEST_CASE("unknown systems are rejected with the valid names") {
    try {
      (void)SystemConfig::defaults("bogus");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      for (const auto& name : system_names()) CHECK(what.find(name) != std::string::npos);
    }
    SystemConfig cfg = SystemConfig::defaults("complexbeat-csi");
    cfg.tau_max_s = 10e-9;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }

  TEST_CASE("seeded room at 0.25 Hz") {
    const auto csi = room(0.25, 7);
    const auto df = run_window(csi, SystemConfig::defaults("complexbeat-csi-df"));
    REQUIRE(df.stable);
    CHECK(std::abs(*df.rate_hz - 0.25) <= 0.01);
    CHECK(df.method == DetectMethod::psd);
    const auto pb = run_window(csi, SystemConfig::defaults("phasebeat-boi-psd"));
    REQUIRE(pb.stable);
    CHECK(std::abs(*pb.rate_hz - 0.25) <= 0.02);
  }

  TEST_CASE("every system recovers the rate at high SNR") {
    for (const auto& name : system_names()) {
      const auto est = run_window(room(0.3, 21), SystemConfig::defaults(name));
      REQUIRE(est.stable);
      CHECK(std::abs(*est.rate_hz - 0.3) <= 0.02);
      CHECK(est.q_score < 0.18);
    }
  }

  TEST_CASE("violent noise is gated") {
    const auto csi = room(0.25, 3, -10.0);
    for (const auto& name : system_names()) {
      const auto est = run_window(csi, SystemConfig::defaults(name));
      CHECK_FALSE(est.stable);
      CHECK_FALSE(est.rate_hz.has_value());
      CHECK(est.q_score >= 0.18);
    }
  }

  TEST_CASE("delay filter is transparent when every path sits on a kept bin") {
    Scenario s;
    s.meta = RadioMeta{297, 1, 2, 29, 9.9, 703125.0, 5.3e9};
    const double bin = s.meta.delay_resolution_s();
    for (int j = 0; j < 2; ++j) {
      s.paths.push_back({{std::polar(1.0, 0.3 * j), 0.0, false}, {std::polar(0.2, 1.0 + j), bin, true}});
    }
    s.motion.rate_hz = 0.35;
    s.distortion.agc = {0.5, 2.0};
    s.distortion.phase_slope = {-0.5, 0.5};
    s.distortion.phase_intercept = {-3.0, 3.0};
    s.distortion.seed = 5;
    const auto csi = simulate(s);
    const auto a = run_window(csi, SystemConfig::defaults("complexbeat-csi"));
    const auto b = run_window(csi, SystemConfig::defaults("complexbeat-csi-df"));
    CHECK(*a.rate_hz == *b.rate_hz);
    CHECK(std::abs(*a.rate_hz - 0.35) <= 0.01);
  }

  TEST_CASE("run_window is deterministic") {
    const auto csi = room(0.4, 9, 15.0);
    for (const auto& name : system_names()) {
      SystemConfig cfg = SystemConfig::defaults(name);
      cfg.q_threshold = 10.0;
      const auto a = run_window(csi, cfg);
      const auto b = run_window(csi, cfg);
      CHECK(a.rate_hz == b.rate_hz);
      CHECK(a.selection_score == b.selection_score);
    }
  }

  TEST_CASE("stage errors carry the stage name") {
    const auto csi = room(0.25, 1).window(0, 40);  // too short for the level-3 wavelet
    try {
      (void)run_window(csi, SystemConfig::defaults("phasebeat-mad-psd"));
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "wavelet");
      CHECK_FALSE(e.estimation_failure());
    }

    // A flat phase-difference series leaves no peaks to count.
    Tensor4<Complex> flat({120, 1, 2, 4});
    for (Index t = 0; t < 120; ++t)
      for (Index m = 0; m < 4; ++m) {
        flat(t, 0, 0, m) = 1.0;
        flat(t, 0, 1, m) = std::polar(1.0, 0.01 * double(m));
      }
    try {
      (void)run_window(CsiSampleSet(RadioMeta{120, 1, 2, 4, 9.9, 1e6, 5e9}, flat), SystemConfig::defaults("phasebeat"));
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "detect");
      CHECK(e.estimation_failure());
    }
  }
}
