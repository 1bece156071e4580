"""Config files, figure presets, and sweep materialization."""

import pytest

from whittle_ua import BsParams, NetworkConfig
from whittle_ua.presets import (ConfigError, K_SWEEP_RULES, PRESET_NAMES,
                                config_from_dict, config_to_dict, load_config,
                                load_preset, sweep_configs)


class TestConfigFiles:
    def test_round_trip(self):
        bs = (BsParams(q=0.3, r=0.2, r_prime=0.6, c=5.0),
              BsParams(q=0.2, r=0.1, r_prime=0.5, c=3.0))
        config = NetworkConfig(k=2, m=4, p=0.45, bs=bs, n_max=50,
                               horizon=1000, measure_window=400, seed=9)
        again, sweep = config_from_dict(config_to_dict(config))
        assert again == config
        assert sweep is None

    def test_comment_lines_stripped(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('# a comment\n{"k": 1, "m": 1, "p": 0.3,\n'
                        '# another\n"bs": [{"q": 0.3, "r": 0.2, '
                        '"r_prime": 0.6, "c": 1.0}]}\n')
        config, _ = load_config(str(path))
        assert config.k == 1 and config.n_max == 200

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"k": 1, "m": }\n')
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_field(self):
        with pytest.raises(ConfigError):
            config_from_dict({"k": 1, "m": 1, "bs": []})

    def test_bad_sweep_param(self):
        data = config_to_dict(
            NetworkConfig(k=1, m=1, p=0.3,
                          bs=(BsParams(q=0.3, r=0.2, r_prime=0.6, c=1.0),)))
        data["sweep"] = {"param": "Q", "values": [1]}
        with pytest.raises(ConfigError):
            config_from_dict(data)
        data["sweep"] = {"param": "M", "values": []}
        with pytest.raises(ConfigError):
            config_from_dict(data)


class TestPresets:
    def test_all_presets_load(self):
        for name in PRESET_NAMES:
            config, _ = load_preset(name)
            assert config.horizon == 20_000
            assert config.measure_window == 10_000

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            load_preset("fig99")

    def test_caption_parameters(self):
        fig2, _ = load_preset("fig2")
        assert (fig2.k, fig2.m, fig2.p) == (5, 20, 0.6)
        fig3, _ = load_preset("fig3")
        assert (fig3.k, fig3.p) == (8, 0.4)
        fig4, _ = load_preset("fig4")
        assert (fig4.k, fig4.m) == (10, 15)
        fig7, _ = load_preset("fig7")
        assert fig7.n_max == 250
        fig8, _ = load_preset("fig8")
        assert fig8.n_max == 100

    def test_fig5_sweep_values(self):
        _, sweep = load_preset("fig5")
        assert sweep["param"] == "M"
        assert sweep["values"] == [20, 40, 60, 80, 100, 120]


class TestKSweepRules:
    def test_growing_network_rule_sixth_bs(self):
        bs = K_SWEEP_RULES["fig6"](6)
        sixth = bs[5]
        assert sixth.r == pytest.approx(0.23)
        assert sixth.r_prime == pytest.approx(0.35)
        assert sixth.c == pytest.approx(100.0)
        assert sixth.q == pytest.approx(0.140)

    def test_alternating_jam_rule_sixth_bs(self):
        bs = K_SWEEP_RULES["fig7"](6)
        assert bs[5].q == pytest.approx(0.24)
        assert K_SWEEP_RULES["fig7"](7)[6].q == pytest.approx(0.25)

    def test_recursive_rule_extends_base(self):
        base = K_SWEEP_RULES["fig8"](6)
        ext = K_SWEEP_RULES["fig8"](7)
        assert ext[:6] == base
        assert ext[6].r == pytest.approx(base[5].r + 0.001)
        assert ext[6].c == pytest.approx(99.4)

    def test_rules_reject_small_networks(self):
        with pytest.raises(ConfigError):
            K_SWEEP_RULES["fig6"](4)
        with pytest.raises(ConfigError):
            K_SWEEP_RULES["fig8"](5)


class TestSweepConfigs:
    def test_m_sweep(self):
        config, sweep = load_preset("fig5")
        pairs = sweep_configs(config, sweep)
        assert [v for v, _ in pairs] == [20, 40, 60, 80, 100, 120]
        assert all(cfg.m == v for v, cfg in pairs)
        assert all(cfg.bs == config.bs for _, cfg in pairs)

    def test_k_sweep_materializes_bs(self):
        config, sweep = load_preset("fig6")
        pairs = sweep_configs(config, sweep)
        assert [v for v, _ in pairs] == [5, 6, 7, 8, 9, 10]
        for v, cfg in pairs:
            assert cfg.k == v and len(cfg.bs) == v

    def test_invalid_value_identified(self):
        config, _ = load_preset("fig2")
        with pytest.raises(ConfigError, match="p=1.5"):
            sweep_configs(config, {"param": "p", "values": [0.3, 1.5]})
