import pytest

from deckscore.config import Config, ConfigError, dump_config, load_config, parse_config


def test_defaults():
    c = Config()
    assert c.retrieval.top_k == 5 and c.retrieval.l_max == 8192
    assert c.artifact.alpha_stab == 0.2 and c.delivery.eta == 0.4
    assert c.overrun == 0.2 and c.summary_cap == 120


def test_parse_overrides():
    c = parse_config(
        """
[retrieval]
top_k = 7
alpha_tree = 0.5
[artifact]
beta = 0.6
[delivery]
omega_R = 0.5
markers = next, finally
std_max = auto
[pacing]
overrun = 0.3
[ingest]
summary_cap = 80
"""
    )
    assert c.retrieval.top_k == 7 and c.retrieval.alpha_tree == 0.5
    assert c.artifact.beta == 0.6 and c.delivery.beta == 0.6
    assert c.delivery.markers == ("next", "finally")
    assert c.delivery.std_max is None
    assert c.overrun == 0.3 and c.summary_cap == 80
    # omega renormalized with the heavier R weight
    assert c.delivery.omega["R"] > c.delivery.omega["N"]


@pytest.mark.parametrize(
    "text",
    [
        "[retrieval]\nk3 = 1\n",
        "[colours]\nred = 1\n",
        "[retrieval]\ntop_k = many\n",
        "[retrieval]\ntop_k = 0\n",
        "[artifact]\nalpha_stab = 0.5\n",
        "[delivery]\nl = 0.9\n",
        "[pacing]\noverrun = -1\n",
        "not an ini file",
    ],
)
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_keys_are_case_sensitive():
    with pytest.raises(ConfigError):
        parse_config("[delivery]\nomega_r = 1\n")


def test_dump_round_trip(tmp_path):
    c = parse_config("[retrieval]\ntop_k = 3\n[delivery]\nstd_max = 12.5\n")
    p = tmp_path / "c.ini"
    p.write_text(dump_config(c))
    assert load_config(p) == c


def test_layered_over_base():
    base = parse_config("[retrieval]\ntop_k = 3\n")
    c = parse_config("[artifact]\ngamma = 0.2\n", base)
    assert c.retrieval.top_k == 3 and c.artifact.gamma == 0.2


def test_as_dict_has_every_section():
    assert set(Config().as_dict()) == {"retrieval", "artifact", "delivery", "pacing", "ingest"}
