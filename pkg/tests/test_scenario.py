import json

import pytest

from hapsris.scenario import (
    ConfigError,
    DEFAULT_CONFIG,
    generate_scenario,
    load_config,
    scenario_to_config,
)


class TestGeneration:
    def test_same_seed_is_bit_identical(self):
        a = generate_scenario(seed=42)
        b = generate_scenario(seed=42)
        assert a.ue_positions == b.ue_positions
        assert a == b

    def test_different_seed_moves_ues(self):
        assert generate_scenario(seed=1).ue_positions != generate_scenario(seed=2).ue_positions

    def test_default_has_thirty_ues_in_bounds(self):
        sc = generate_scenario()
        assert sc.n_ues == 30
        for p in sc.ue_positions:
            assert 0 <= p.x <= sc.area_m[0]
            assert 0 <= p.y <= sc.area_m[1]
            assert p.z == 0.0

    def test_explicit_positions_respected(self):
        cfg = {"ues": {"count": 2, "positions": [[1.0, 2.0, 0.0], [3.0, 4.0, 0.0]]}}
        sc = generate_scenario(cfg)
        assert sc.n_ues == 2
        assert sc.ue_positions[1].y == 4.0

    def test_position_outside_area_rejected(self):
        cfg = {"ues": {"count": 1, "positions": [[99999.0, 0.0, 0.0]]}}
        with pytest.raises(ConfigError, match="outside area"):
            generate_scenario(cfg)

    def test_count_mismatch_rejected(self):
        cfg = {"ues": {"count": 3, "positions": [[1.0, 1.0, 0.0]]}}
        with pytest.raises(ConfigError, match="does not match"):
            generate_scenario(cfg)

    def test_noise_floor_matches_density_and_bandwidth(self):
        import math

        sc = generate_scenario()
        # -174 dBm/Hz over 2 MHz = -110.99 dBm
        assert 10 * math.log10(sc.noise_floor_w) + 30 == pytest.approx(-110.99, abs=0.01)


class TestConfigFiles:
    def test_unknown_field_is_named(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"channel": {"c9": 1.0}}))
        with pytest.raises(ConfigError, match="channel.c9"):
            load_config(str(path))

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "area": {,}\n}')
        with pytest.raises(ConfigError, match="line 2"):
            load_config(str(path))

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config("/nonexistent/config.json")

    def test_incomplete_bucket_table_rejected(self, tmp_path):
        table = {str(b): 25.0 for b in range(10, 90, 10)}  # 90 missing
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"channel": {"clutter_loss_nlos_db": table}}))
        with pytest.raises(ConfigError, match="missing elevation buckets"):
            generate_scenario(load_config(str(path)))

    def test_roundtrip_through_resolved_file(self, tmp_path):
        sc = generate_scenario(seed=5)
        path = tmp_path / "resolved.json"
        path.write_text(json.dumps(scenario_to_config(sc)))
        sc2 = generate_scenario(load_config(str(path)))
        assert sc2.ue_positions == sc.ue_positions
        assert sc2.channel == sc.channel
        assert sc2.p_max_w == pytest.approx(sc.p_max_w, rel=1e-12)


class TestSurfaceDensityWarning:
    def test_warns_when_elements_exceed_aperture(self):
        with pytest.warns(UserWarning, match="exceed"):
            generate_scenario({"ris": {"n_total": 389120, "surface_area_m2": 10.0}})

    def test_silent_within_aperture(self, recwarn):
        generate_scenario({"ris": {"n_total": 389120, "surface_area_m2": 650.0}})
        assert not [w for w in recwarn if "exceed" in str(w.message)]

    def test_default_sweep_range_fits_default_aperture(self, recwarn):
        generate_scenario({"ris": {"n_total": 716800}})
        assert not [w for w in recwarn if "exceed" in str(w.message)]


def test_default_config_matches_reference_parameters():
    b = DEFAULT_CONFIG["budgets"]
    assert (b["p_max_dbm"], b["p_ue_max_dbm"], b["p_ue_min_dbm"]) == (33.0, 30.0, 5.0)
    assert (b["n_ue_min"], b["n_ue_max"]) == (1000, 50000)
    assert b["r_min_bps"] == 2e6
    assert DEFAULT_CONFIG["spectrum"]["carrier_ghz"] == 2.0
    assert DEFAULT_CONFIG["spectrum"]["bandwidth_per_ue_hz"] == 2e6
    assert DEFAULT_CONFIG["ris"]["n_total"] == 389120
    assert DEFAULT_CONFIG["ris"]["pa_power_dbm"] == 33.0
    assert DEFAULT_CONFIG["ues"]["count"] == 30
