import io
import json
import subprocess
import sys

import pytest

from compmod.cli import CSV_HEADER, UsageError, main, parse_and_validate, parse_snr_sweep


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    rc = main(argv, out=out, err=err)
    return rc, out.getvalue(), err.getvalue()


def test_parse_simulate_cm():
    spec = parse_and_validate("simulate --scheme cm --i 7 --n 4 --m 2 --snr 0:5:40 --seed 42".split())
    assert spec.command == "simulate" and spec.seed == 42
    assert spec.snr_db == [0, 5, 10, 15, 20, 25, 30, 35, 40]
    s = spec.schemes[0]
    assert (s.scheme, s.I, s.N, s.M) == ("cm", 7, 4, 2)


def test_parse_cull():
    spec = parse_and_validate("cull --scheme wcm --i 4 --n 4 --lambda 1 --target-bits 8".split())
    assert spec.schemes[0].cull_bits == 8


@pytest.mark.parametrize("argv,needle", [
    ("simulate --scheme cm --i 3 --n 4 --m 2 --snr 0:5:40", "I must be >= N"),
    ("simulate --scheme cm --i 7 --n 4 --m 3 --snr 0", "--m"),
    ("simulate --scheme cm --i 7 --n 4 --m 2 --snr 5:1", "--snr"),
    ("cull --scheme wcm --i 4 --n 4 --lambda 1 --target-bits 9", "--cull-bits"),
    ("cull --scheme wcm --i 4 --n 4 --lambda 1", "--target-bits"),
    ("simulate --scheme cm --i 7 --n 4 --m 2 --snr 0 --bogus", "unrecognized"),
    ("compare --spec cm,i=7,n=4,m=2 --snr 0", "--spec"),
])
def test_usage_errors(argv, needle):
    with pytest.raises(UsageError, match=needle):
        parse_and_validate(argv.split())
    rc, out, err = call(argv.split())
    assert rc == 2
    assert err.count("\n") == 1 and err.startswith("error: usage:")


def test_snr_sweep_parsing():
    assert parse_snr_sweep("0:2.5:5") == [0.0, 2.5, 5.0]
    assert parse_snr_sweep("7") == [7.0]


def test_codebook_dump_reproduces_table():
    rc, out, _ = call("codebook --scheme wcm --i 3 --n 3 --lambda 1".split())
    assert rc == 0
    lines = out.splitlines()
    body = lines[2:]
    assert len(body) == 10
    assert body[0].split() == ["3=0+0+3", "{0,", "0,", "E_T}", "(0,", "0,", "8-PSK)", "[0", "0", "0]"]
    assert body[5].startswith("3=1+1+1") and "(BPSK, BPSK, BPSK)" in body[5] and body[5].endswith("[1 0 1]")
    assert body[8].endswith("unused") and body[9].endswith("unused")


def test_cull_report():
    rc, out, _ = call("cull --scheme wcm --i 4 --n 4 --lambda 1 --target-bits 8".split())
    assert rc == 0
    assert "before: codewords=512" in out and "after: codewords=256" in out


def test_bound_csv_schema():
    rc, out, _ = call("bound --scheme cm --i 7 --n 4 --m 2 --snr 10:10:30".split())
    assert rc == 0
    rows = out.splitlines()
    assert rows[0] == ",".join(CSV_HEADER)
    assert len(rows) == 4
    assert all(r.split(",")[4] == "" and float(r.split(",")[5]) > 0 for r in rows[1:])


def test_simulate_is_byte_identical(tmp_path):
    argv = "simulate --scheme cm --i 7 --n 4 --m 2 --snr 0:10:20 --seed 42 --max-trials 5000".split()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert call(argv + ["--out", str(a), "--manifest"])[0] == 0
    assert call(argv + ["--out", str(b), "--workers", "8"])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert text.splitlines()[1].split(",")[5] == ""
    manifest = json.loads((tmp_path / "a.csv.json").read_text())
    assert manifest["seed"] == 42 and manifest["schemes"] == "cm-7-4-2"


def test_compare_reports_matched_se():
    argv = ["compare", "--bound-only", "--snr", "40:10:50",
            "--spec", "wcm,i=6,n=4,lambda=1,cull=11", "--spec", "cm,i=6,n=4,m=4",
            "--spec", "cm,i=12,n=4,m=2", "--spec", "im,n=4,k=3,m=8"]
    rc, out, err = call(argv)
    assert rc == 0
    summary = [l for l in err.splitlines() if l and not l.startswith("#")][1:]
    assert len(summary) == 4
    assert all(l.split(",")[1] == "2.75" for l in summary)
    assert out.splitlines()[0] == "scheme," + ",".join(CSV_HEADER)


def test_runtime_error_exit_code():
    # 2^(lambda*I) constellation beyond the implementation limit
    rc, _, err = call("codebook --scheme wcm --i 20 --n 2 --lambda 1".split())
    assert rc == 3 and err.startswith("error: runtime:")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "compmod", "codebook", "--scheme", "cm", "--i", "4",
                          "--n", "4", "--m", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "4=1+1+1+1" in res.stdout
