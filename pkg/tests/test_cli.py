import json
import subprocess
import sys

import numpy as np
import pytest

from opmono import serialize as io
from opmono.cli import main
from opmono.sampling import rand_psd, rand_tuple_interval


def run_cli(*argv):
    """Invoke the CLI in-process, capturing stdout."""
    import contextlib
    import io as stdio

    buf = stdio.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


class TestCheck:
    def test_sqrt_monotone_passes(self):
        code, out = run_cli("check", "sqrt", "monotone", "--n", "4", "--trials", "200", "--seed", "7")
        assert code == 0
        assert "PASS" in out

    def test_xsq_counterexample(self, tmp_path):
        out_file = tmp_path / "report.json"
        code, out = run_cli(
            "check", "xsq", "monotone", "--n", "2", "--trials", "1000",
            "--seed", "1", "--out", str(out_file),
        )
        assert code == 2
        kind, payload = io.load(str(out_file))
        assert payload["verdict"] == "counterexample"
        assert payload["counterexample"] is not None

    def test_unknown_function(self):
        code, _ = run_cli("check", "nosuchfn", "monotone")
        assert code == 64

    def test_nc_axioms(self):
        code, out = run_cli("check", "harmonic", "nc-axioms", "--n", "3", "--trials", "30")
        assert code == 0

    def test_json_determinism(self):
        args = ("check", "sqrt", "monotone", "--n", "3", "--trials", "50",
                "--seed", "11", "--format", "json")
        code1, out1 = run_cli(*args)
        code2, out2 = run_cli(*args)
        assert code1 == code2 == 0
        assert out1 == out2  # byte-identical reports


class TestSchur:
    def test_identity_pivot(self, tmp_path):
        path = tmp_path / "m.json"
        io.save(str(path), "matrix", io.encode_matrix(np.eye(2)))
        out_file = tmp_path / "out.json"
        code, out = run_cli("schur", str(path), "--pivot", "0", "--mode", "psd",
                            "--out", str(out_file))
        assert code == 0
        _, payload = io.load(str(out_file), expect="matrix")
        assert np.allclose(io.decode_matrix(payload), [[1.0]])

    def test_hand_example(self, tmp_path):
        path = tmp_path / "m.json"
        io.save(str(path), "matrix", io.encode_matrix(np.array([[2.0, 1.0], [1.0, 1.0]])))
        out_file = tmp_path / "s.json"
        code, _ = run_cli("schur", str(path), "--pivot", "0", "--out", str(out_file))
        assert code == 0
        _, payload = io.load(str(out_file), expect="matrix")
        assert np.allclose(io.decode_matrix(payload), [[1.0]], atol=1e-10)

    def test_not_psd_exit_one(self, tmp_path):
        path = tmp_path / "m.json"
        io.save(str(path), "matrix", io.encode_matrix(np.diag([1.0, -1.0])))
        code, _ = run_cli("schur", str(path), "--pivot", "0", "--mode", "psd")
        assert code == 1

    def test_parse_error_exit_65(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _ = run_cli("schur", str(path), "--pivot", "0")
        assert code == 65


class TestSupportReconstruct:
    def test_sqrt_round_trip(self, tmp_path):
        a = np.diag([1.0, 4.0])
        tuple_path = tmp_path / "a.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((a,)))
        cert_path = tmp_path / "cert.json"
        code, out = run_cli(
            "support", "sqrt", str(tuple_path), "--v-index", "0", "--interval", "0.5,5",
            "--samples", "60", "--seed", "3", "--out", str(cert_path),
        )
        assert code == 0
        value_path = tmp_path / "value.json"
        code, out = run_cli("reconstruct", str(cert_path), "--out", str(value_path))
        assert code == 0
        _, payload = io.load(str(value_path), expect="matrix")
        value = io.decode_matrix(payload).reshape(-1)
        assert np.linalg.norm(value - np.array([1.0, 0.0])) <= 1e-6


class TestRepeval:
    def test_quadrep_then_eval(self, tmp_path):
        rep_path = tmp_path / "rep.json"
        code, out = run_cli(
            "quadrep", "sqrt", "--nodes", "64", "--interval", "0.1,10", "--out", str(rep_path)
        )
        assert code == 0
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((np.diag([1.0, 4.0]),)))
        out_path = tmp_path / "y.json"
        code, _ = run_cli("repeval", str(rep_path), str(tuple_path), "--out", str(out_path))
        assert code == 0
        _, payload = io.load(str(out_path), expect="matrix")
        assert np.linalg.norm(io.decode_matrix(payload) - np.diag([1.0, 2.0])) <= 1e-3 * 3

    def test_arity_mismatch_exit_one(self, tmp_path):
        rep_path = tmp_path / "rep.json"
        run_cli("quadrep", "sqrt", "--nodes", "16", "--interval", "0.5,2", "--out", str(rep_path))
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((np.eye(2), np.eye(2))))
        code, _ = run_cli("repeval", str(rep_path), str(tuple_path))
        assert code == 1


class TestMean:
    def test_geometric_scalars(self, tmp_path):
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((4 * np.eye(2), 9 * np.eye(2))))
        out_path = tmp_path / "m.json"
        code, _ = run_cli("mean", "geomean2", str(tuple_path), "--out", str(out_path))
        assert code == 0
        _, payload = io.load(str(out_path), expect="matrix")
        assert np.allclose(io.decode_matrix(payload), 6 * np.eye(2), atol=1e-10)

    def test_karcher_idempotent(self, tmp_path):
        rng = np.random.default_rng(0)
        a = rand_psd(rng, 2) + 0.5 * np.eye(2)
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((a, a)))
        out_path = tmp_path / "m.json"
        code, out = run_cli("mean", "karcher", str(tuple_path), "--out", str(out_path))
        assert code == 0
        assert "polish iterations" in out
        _, payload = io.load(str(out_path), expect="matrix")
        assert np.linalg.norm(io.decode_matrix(payload) - a) <= 1e-8

    def test_karcher_commuting_oracle(self, tmp_path):
        x = (np.diag([1.0, 2.0]), np.diag([3.0, 0.5]))
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple(x))
        out_path = tmp_path / "m.json"
        code, _ = run_cli("mean", "karcher", str(tuple_path), "--out", str(out_path))
        assert code == 0
        _, payload = io.load(str(out_path), expect="matrix")
        expect = np.diag(np.sqrt(np.diag(x[0]) * np.diag(x[1])))
        assert np.linalg.norm(io.decode_matrix(payload) - expect) <= 1e-8

    def test_not_pd_exit(self, tmp_path):
        tuple_path = tmp_path / "x.json"
        io.save(str(tuple_path), "tuple", io.encode_tuple((np.diag([1.0, -1.0]), np.eye(2))))
        code, _ = run_cli("mean", "karcher", str(tuple_path))
        assert code == 1


class TestEndToEndSubprocess:
    def test_module_invocation(self, tmp_path):
        # one true end-to-end check through the interpreter
        result = subprocess.run(
            [sys.executable, "-m", "opmono", "check", "identity", "monotone",
             "--n", "2", "--trials", "20", "--seed", "0"],
            capture_output=True, text=True, timeout=120,
        )
        assert result.returncode == 0
        assert "PASS" in result.stdout

    def test_pencil_eval_file_flow(self, tmp_path):
        rng = np.random.default_rng(1)
        bi = [rand_psd(rng, 2) for _ in range(2)]
        from opmono.pencil import pencil_new

        p = pencil_new([sum(bi) + np.eye(2)] + bi)
        pencil_path = tmp_path / "p.json"
        io.save(str(pencil_path), "pencil", io.pencil_payload(p))
        tuple_path = tmp_path / "x.json"
        x = rand_tuple_interval(rng, 2, 2, 0.5, 2.0)
        io.save(str(tuple_path), "tuple", io.encode_tuple(x))
        out_path = tmp_path / "y.json"
        code, _ = run_cli("pencil-eval", str(pencil_path), str(tuple_path), "--out", str(out_path))
        assert code == 0
        _, payload = io.load(str(out_path), expect="matrix")
        from opmono.pencil import pencil_eval

        assert np.allclose(io.decode_matrix(payload), pencil_eval(p, x))
