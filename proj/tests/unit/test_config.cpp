#include <doctest.h>

#include "csibreath/config.hpp"
#include "csibreath/dataio.hpp"
#include "csibreath/error.hpp"

using namespace csibreath;

namespace {

int error_line(const std::string& text) {
  try {
    (void)scenario_from_config(ConfigDocument::parse(text, "s.ini"));
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kRadio =
    "[radio]\n"
    "snapshots = 297\n"
    "num_tx = 1\n"
    "num_rx = 2\n"
    "subcarriers = 29\n"
    "snapshot_rate_hz = 9.9\n"
    "subcarrier_spacing_hz = 703125\n"
    "carrier_freq_hz = 5.3e9\n";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("document grammar") {
    const auto doc = ConfigDocument::parse(
        "# leading comment\n"
        "[a]\n"
        "x = 1   ; trailing\n"
        "  y=two words  \n"
        "[b]\n"
        "[a]\n"
        "x = 3\n");
    REQUIRE(doc.all("a").size() == 2);
    CHECK(doc.section("a")->find("x")->value == "1");
    CHECK(doc.section("a")->find("y")->value == "two words");
    CHECK(doc.section("a")->find("y")->line == 4);
    CHECK(doc.all("a")[1]->find("x")->value == "3");
    CHECK(doc.section("b")->entries.empty());
    CHECK(doc.section("c") == nullptr);
  }

  TEST_CASE("grammar errors report the line") {
    const auto line_of = [](const char* text) {
      try {
        (void)ConfigDocument::parse(text, "f.ini");
      } catch (const ConfigError& e) {
        CHECK(e.file() == "f.ini");
        return e.line();
      }
      return -1;
    };
    CHECK(line_of("[a]\nx = 1\nx = 2\n") == 3);
    CHECK(line_of("[a\n") == 1);
    CHECK(line_of("[a]\n\njunk\n") == 3);
    CHECK(line_of("[a]\nx =\n") == 2);
    CHECK(line_of("[a b]\n") == 1);
  }

  TEST_CASE("typed reads") {
    const auto doc = ConfigDocument::parse("[s]\nn = 2.5e-3\ni = 42\nb = yes\nbad = 1.5x\nf = maybe\n");
    SectionReader r(doc, *doc.section("s"));
    CHECK(r.number("n") == 2.5e-3);
    CHECK(r.integer("i") == 42);
    CHECK(r.boolean("b", false));
    CHECK(r.number("missing", 7.0) == 7.0);
    CHECK_THROWS_AS(r.number("bad"), ConfigError);
    CHECK_THROWS_AS(r.integer("n"), ConfigError);
    CHECK_THROWS_AS(r.boolean("f", false), ConfigError);
    CHECK_THROWS_AS(r.number("missing"), ConfigError);
    CHECK_THROWS_AS(r.only({"n", "i"}), ConfigError);
  }

  TEST_CASE("scenario with explicit paths") {
    const std::string text = std::string(kRadio) +
                             "[motion]\nrate_hz = 0.3\n"
                             "[distortion]\nagc_min = 0.5\nagc_max = 2\nsnr_db = none\nseed = 9\n"
                             "[path]\ngain = 1\ndelay_ns = 5\n"
                             "[path]\nrx = 1\ngain = 0.2\nphase_rad = 1\ndelay_ns = 120\n"
                             "[path]\ngain = 0.1\ndelay_ns = 30\ndynamic = true\n";
    const Scenario s = scenario_from_config(ConfigDocument::parse(text));
    CHECK(s.meta.num_snapshots == 297);
    CHECK(s.paths_for(0, 0).size() == 2);
    CHECK(s.paths_for(0, 1).size() == 3);
    CHECK(s.paths_for(0, 1)[1].delay_s == doctest::Approx(120e-9));
    CHECK(std::arg(s.paths_for(0, 1)[1].attenuation) == doctest::Approx(1.0));
    CHECK(s.motion.rate_hz == 0.3);
    CHECK_FALSE(s.distortion.snr_db.has_value());
    CHECK(s.distortion.agc == Range{0.5, 2.0});
    CHECK(s.distortion.seed == 9);
  }

  TEST_CASE("scenario round trips through its config text") {
    const std::string text = std::string(kRadio) + "[motion]\nrate_hz = 0.4\n[room]\nseed = 4\n[distortion]\nsnr_db = 25\n";
    const Scenario s = scenario_from_config(ConfigDocument::parse(text));
    const Scenario back = scenario_from_config(ConfigDocument::parse(scenario_to_config(s)));
    CHECK(back.meta == s.meta);
    CHECK(back.motion.rate_hz == s.motion.rate_hz);
    CHECK(back.motion.phase0_rad == s.motion.phase0_rad);
    CHECK(back.distortion.snr_db == s.distortion.snr_db);
    REQUIRE(back.paths.size() == s.paths.size());
    for (std::size_t k = 0; k < s.paths.size(); ++k) {
      REQUIRE(back.paths[k].size() == s.paths[k].size());
      for (std::size_t p = 0; p < s.paths[k].size(); ++p) {
        CHECK(std::abs(back.paths[k][p].attenuation - s.paths[k][p].attenuation) < 1e-15);
        CHECK(back.paths[k][p].delay_s == s.paths[k][p].delay_s);
        CHECK(back.paths[k][p].dynamic == s.paths[k][p].dynamic);
      }
    }
  }

  TEST_CASE("scenario errors point at the offending line") {
    const std::string base = std::string(kRadio) + "[motion]\nrate_hz = 0.3\n";
    CHECK(error_line(base + "[path]\ngain = 1\ndelay_ns = 5\nspeed = 3\n") == 14);
    CHECK(error_line(base + "[mystery]\n") == 11);
    CHECK(error_line(base + "[path]\ntx = 4\ngain = 1\ndelay_ns = 5\n") == 11);
    CHECK(error_line(std::string(kRadio) + "[motion]\nrate_hz = fast\n[room]\nseed = 1\n") == 10);
    // Semantic errors (no dynamic path) are reported against the document.
    CHECK(error_line(base + "[path]\ngain = 1\ndelay_ns = 5\n") == 0);
    CHECK(error_line(base + "[room]\nseed = 1\n[path]\ngain = 1\ndelay_ns = 5\n") == 11);
  }

  TEST_CASE("system files") {
    const auto cfg = system_from_config(ConfigDocument::parse("[system]\nname = complexbeat-csi-df\ntau_max_ns = 80\n"));
    CHECK(cfg.name == "complexbeat-csi-df");
    CHECK(*cfg.tau_max_s == doctest::Approx(80e-9));
    CHECK(cfg.q_threshold == 0.18);
    for (const auto& sys : list_systems()) {
      CHECK(system_from_config(ConfigDocument::parse(system_to_config(sys))) == sys);
    }
    CHECK_THROWS_AS(system_from_config(ConfigDocument::parse("[system]\nname = bogus\n")), ConfigError);
    CHECK_THROWS_AS(system_from_config(ConfigDocument::parse("[system]\nname = phasebeat\ntau_max_ns = 5\n")),
                    ConfigError);
    CHECK_THROWS_AS(system_from_config(ConfigDocument::parse("[system]\nname = phasebeat\nfit_window = 1\n")),
                    ConfigError);
  }
}
