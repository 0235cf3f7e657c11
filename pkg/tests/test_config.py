import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logpole.config import RunConfig, dump, load, parse_levels
from logpole.errors import ConfigurationError


def test_defaults_resolve():
    cfg = RunConfig().resolved()
    assert cfg.M == 320.0 and cfg.n0 == 4 and cfg.levels == (4, 11)
    assert list(cfg.level_range) == list(range(4, 12))
    eps = RunConfig(variant="epsilon").resolved()
    assert eps.n0 == 2


def test_parse_levels():
    assert parse_levels("4..10") == (4, 10)
    assert parse_levels(" 7 ") == (7, 7)
    for bad in ("x..3", "5..4", "0..2"):
        with pytest.raises(ConfigurationError):
            parse_levels(bad)


@pytest.mark.parametrize(
    "changes",
    [{"d": 0}, {"N": -1}, {"M": 0.5}, {"M": "big"}, {"variant": "x"}, {"n0": 0}, {"epsilon": 0.0},
     {"rel_tol": -1.0}, {"formats": ("xml",)}],
)
def test_validation(changes):
    with pytest.raises(ConfigurationError):
        RunConfig(**changes)


def test_span_below_n0():
    with pytest.raises(ConfigurationError):
        RunConfig(levels=(2, 5)).resolved()


floats = st.floats(1e-14, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=80, deadline=None)
@given(
    d=st.integers(1, 6),
    N=st.integers(0, 5),
    M=st.one_of(st.just("auto"), st.floats(1.0001, 1e4)),
    variant=st.sampled_from(["standard", "epsilon"]),
    eps=st.floats(0.01, 5.0),
    n0=st.one_of(st.just("auto"), st.integers(1, 30)),
    lv=st.one_of(st.none(), st.tuples(st.integers(1, 40), st.integers(0, 10))),
    tol=floats,
    out=st.one_of(st.none(), st.text("abc/_-", min_size=1, max_size=8)),
    fmt=st.sampled_from([("csv",), ("json",), ("csv", "json")]),
)
def test_round_trip_bit_exact(d, N, M, variant, eps, n0, lv, tol, out, fmt):
    levels = None if lv is None else (lv[0], lv[0] + lv[1])
    cfg = RunConfig(d=d, N=N, M=M, variant=variant, epsilon=eps, n0=n0, levels=levels,
                    rel_tol=tol, fd_step=tol, scan_density=tol, out=out, formats=fmt)
    text = cfg.to_text()
    back = RunConfig.from_text(text)
    assert back == cfg
    assert back.to_text() == text


def test_file_round_trip_and_headers(tmp_path):
    cfg = RunConfig(M=333.25, levels=(5, 9)).resolved()
    path = tmp_path / "run.cfg"
    dump(cfg, path)
    assert load(path) == cfg
    # the CSV header comment is itself a loadable config
    assert RunConfig.from_text("\n".join(cfg.header_lines()) + "\nn,lambda\n4,1.0\n") == cfg


def test_version_and_keys():
    with pytest.raises(ConfigurationError):
        RunConfig.from_text("version = 2\nd = 3\n")
    with pytest.raises(ConfigurationError):
        RunConfig.from_text("version = 1\ncolour = red\n")
