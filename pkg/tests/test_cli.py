import copy
import json
import subprocess
import sys

import pytest

from sqprod.cli import EXIT_ERROR, EXIT_INCOMPLETE, EXIT_OK, main
from sqprod.pipeline import (
    CertificateMismatch,
    RunConfig,
    StageError,
    check_certificate,
    run_check_certificate,
    run_verify,
)


@pytest.fixture(scope="module")
def certs():
    return {l: run_verify(RunConfig(l)) for l in (1, 3, 7)}


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(4)
    with pytest.raises(ValueError):
        RunConfig(1, convention="lt")
    with pytest.raises(ValueError):
        RunConfig(1, direct_cap=0)


def test_run_config_env(monkeypatch):
    monkeypatch.setenv("SQPROD_DIRECT_CAP", "77")
    monkeypatch.setenv("SQPROD_CHAIN_STEP_CAP", "5")
    cfg = RunConfig.from_env(3, direct_cap=None)
    assert cfg.direct_cap == 77 and cfg.chain_step_cap == 5
    assert RunConfig.from_env(3, direct_cap=12).direct_cap == 12


@pytest.mark.parametrize("l, squares", [(1, ()), (3, ()), (7, (1,))])
def test_corollaries(certs, l, squares):
    cert = certs[l]
    assert cert.complete
    assert cert.squares == squares


def test_certificate_schema(certs):
    data = certs[7].to_json()
    assert list(data) == ["l", "threshold", "direct", "chain", "conclusion"]
    assert set(data["threshold"]) >= {"limit", "value", "convention", "crossing_prime", "sum", "rigor_margin"}
    assert data["threshold"]["value"] == 2142500
    assert data["direct"]["range"] == [1, 10**4]
    assert all(set(link) == {"k", "q", "cover"} for link in data["chain"])
    assert data["conclusion"] == {"squares": [1], "complete": True}


@pytest.mark.parametrize("l", [1, 3, 7])
def test_round_trip(certs, tmp_path, l):
    path = tmp_path / f"cert{l}.json"
    path.write_text(certs[l].dumps())
    assert run_check_certificate(path)
    reparsed = json.loads(path.read_text())
    assert reparsed["threshold"]["sum"] == certs[l].threshold.sum_at_threshold


def _tampered(cert, edit):
    data = copy.deepcopy(cert.to_json())
    edit(data)
    return data


TAMPERS = {
    "threshold value": lambda d: d["threshold"].__setitem__("value", 2142499),
    "crossing prime": lambda d: d["threshold"].__setitem__("crossing_prime", 2142497),
    "limit": lambda d: d["threshold"].__setitem__("limit", d["threshold"]["limit"] + 1e-6),
    "sum": lambda d: d["threshold"].__setitem__("sum", d["threshold"]["sum"] * (1 + 1e-9)),
    "convention": lambda d: d["threshold"].__setitem__("convention", "leq"),
    "witness k composite": lambda d: d["chain"][0].update(k=5, q=2 * 25 + 7, cover=[5, 51]),
    "witness q": lambda d: d["chain"][1].__setitem__("q", d["chain"][1]["q"] + 2),
    "cover": lambda d: d["chain"][-1].__setitem__("cover", [d["chain"][-1]["k"], 10**12]),
    "dropped witness": lambda d: d["chain"].pop(1),
    "direct squares": lambda d: d["direct"].__setitem__("squares", []),
    "conclusion squares": lambda d: d["conclusion"].__setitem__("squares", []),
    "complete flag": lambda d: d["conclusion"].__setitem__("complete", False),
    "l": lambda d: d.__setitem__("l", 9),
    "missing key": lambda d: d.pop("direct"),
}


@pytest.mark.parametrize("name", sorted(TAMPERS))
def test_tampering_detected(certs, name):
    data = _tampered(certs[7], TAMPERS[name])
    with pytest.raises(CertificateMismatch):
        check_certificate(data)


def test_tampered_file_rejected(certs, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(_tampered(certs[7], TAMPERS["threshold value"])))
    assert not run_check_certificate(path)
    assert main(["check", str(path)]) == EXIT_ERROR


def test_deterministic_bytes(certs):
    assert run_verify(RunConfig(7)).dumps() == certs[7].dumps()


def test_l1_chain_restarts_like_the_paper(certs):
    assert certs[1].chain.witnesses[0].k == 3
    assert certs[3].chain.witnesses[0].k == 1
    assert certs[7].chain.witnesses[0].k == 6


def test_text_report_bullets(certs):
    text = certs[1].report()
    w = certs[1].chain.witnesses[0]
    assert f"since 2*{w.k}^2+1 = {w.q} is prime" in text
    assert "not a square for any n >= 1" in text
    assert "square only for n in [1]" in certs[7].report()


def test_incomplete_run():
    cert = run_verify(RunConfig(1, chain_step_cap=1, direct_cap=20))
    assert not cert.complete
    assert cert.chain.witnesses == ()
    assert check_certificate(cert.to_json()) is False


def test_stage_error_identifies_stage():
    with pytest.raises(StageError) as info:
        run_verify(RunConfig(1, threshold_cap=1000))
    assert info.value.stage == "threshold"
    with pytest.raises(StageError) as info:
        run_verify(RunConfig(1, threshold_cap=10**7, sieve_bound=10**6))
    assert info.value.stage == "threshold"


def test_cli_threshold(capsys):
    assert main(["threshold", "--l", "1"]) == EXIT_OK
    assert "706310" in capsys.readouterr().out
    assert main(["threshold", "--l", "1", "--convention", "leq"]) == EXIT_OK
    assert "N_l = 706309" in capsys.readouterr().out


def test_cli_symbol(capsys):
    assert main(["symbol", "--l", "1", "--p", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "not in S" in out and "= -1" in out
    assert main(["symbol", "--l", "1", "--p", "3"]) == EXIT_OK
    assert "is in S" in capsys.readouterr().out
    assert main(["symbol", "--l", "3", "--p", "3"]) == EXIT_OK
    assert "= 0" in capsys.readouterr().out
    assert main(["symbol", "--l", "1", "--p", "9"]) == EXIT_ERROR


def test_cli_direct(capsys):
    assert main(["direct", "--l", "7", "--up-to", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "[1]"


def test_cli_chain(capsys):
    assert main(["chain", "--l", "1", "--from", "3", "--to", "706309"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "k=3 q=19 cover=[3, 15]" in out
    assert main(["chain", "--l", "1", "--from", "9", "--to", "3"]) == EXIT_ERROR


def test_cli_verify_and_check(tmp_path, capsys):
    path = tmp_path / "c3.json"
    assert main(["verify", "--l", "3", "--json", str(path)]) == EXIT_OK
    assert "not a square for any n >= 1" in capsys.readouterr().out
    assert main(["check", str(path)]) == EXIT_OK
    assert "certificate OK" in capsys.readouterr().out


def test_cli_verify_json_format(capsys):
    assert main(["verify", "--l", "7", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["conclusion"]["squares"] == [1]


def test_cli_incomplete_exit_code(tmp_path):
    path = tmp_path / "inc.json"
    assert main(["verify", "--l", "1", "--chain-step-cap", "1", "--direct-cap", "20", "--json", str(path)]) == EXIT_INCOMPLETE
    assert main(["check", str(path)]) == EXIT_INCOMPLETE


def test_cli_usage_errors(tmp_path):
    for argv in (["threshold", "--l", "4"], ["threshold"], ["symbol", "--l", "1", "--p", "x"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == EXIT_ERROR
    with pytest.raises(SystemExit) as info:
        main(["threshold"])
    assert info.value.code == EXIT_ERROR
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == EXIT_ERROR
    assert main(["check", str(tmp_path / "missing.json")]) == EXIT_ERROR
    assert main(["direct", "--l", "1", "--up-to", str(10**6)]) == EXIT_ERROR


def test_cli_env_cap(monkeypatch):
    monkeypatch.setenv("SQPROD_THRESHOLD_CAP", "1000")
    assert main(["verify", "--l", "1"]) == EXIT_ERROR


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sqprod", "direct", "--l", "7", "--up-to", "5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "[1]"
