import numpy as np
import pytest

from sparseasm import AssemblyRequest, assemble_serial
from sparseasm.cli import main
from sparseasm.mmio import read_triplets_matrixmarket, write_triplets_matrixmarket
from sparseasm.types import Dimensions, TripletList

from conftest import EXAMPLE_I, EXAMPLE_J, EXAMPLE_S


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "in.mtx"
    t = TripletList(
        np.asarray(EXAMPLE_I, dtype=np.int32),
        np.asarray(EXAMPLE_J, dtype=np.int32),
        np.asarray(EXAMPLE_S, dtype=np.float64),
    )
    write_triplets_matrixmarket(t, Dimensions(4, 4), path)
    return path


class TestAssemble:
    def test_basic(self, example_file, tmp_path):
        out = tmp_path / "out.mtx"
        rc = main(["assemble", "--input", str(example_file), "--output", str(out)])
        assert rc == 0
        t, dims = read_triplets_matrixmarket(out)
        assert len(t) == 10 and (dims.m, dims.n) == (4, 4)

    def test_serial_flag(self, example_file, tmp_path):
        out = tmp_path / "out.mtx"
        assert main(["assemble", "--input", str(example_file), "--output", str(out), "--serial"]) == 0

    def test_threads_deterministic_output(self, example_file, tmp_path):
        out1 = tmp_path / "o1.mtx"
        out8 = tmp_path / "o8.mtx"
        base = ["assemble", "--input", str(example_file)]
        assert main(base + ["--output", str(out1), "--threads", "1"]) == 0
        assert main(base + ["--output", str(out8), "--threads", "8"]) == 0
        assert out1.read_bytes() == out8.read_bytes()

    def test_explicit_dims(self, example_file, tmp_path):
        out = tmp_path / "o.mtx"
        rc = main(
            ["assemble", "--input", str(example_file), "--output", str(out),
             "--m", "6", "--n", "7"]
        )
        assert rc == 0
        _, dims = read_triplets_matrixmarket(out)
        assert (dims.m, dims.n) == (6, 7)

    def test_dims_too_small_exits_1(self, example_file, tmp_path):
        out = tmp_path / "o.mtx"
        rc = main(
            ["assemble", "--input", str(example_file), "--output", str(out),
             "--m", "3", "--n", "3"]
        )
        assert rc == 1

    def test_m_without_n_exits_1(self, example_file, tmp_path):
        rc = main(
            ["assemble", "--input", str(example_file),
             "--output", str(tmp_path / "o.mtx"), "--m", "9"]
        )
        assert rc == 1

    def test_missing_input_exits_1(self, tmp_path):
        rc = main(
            ["assemble", "--input", str(tmp_path / "nope.mtx"),
             "--output", str(tmp_path / "o.mtx")]
        )
        assert rc == 1

    def test_prune_zeros(self, tmp_path):
        src = tmp_path / "z.mtx"
        t = TripletList(
            np.asarray([1, 1, 2], dtype=np.int32),
            np.asarray([1, 1, 2], dtype=np.int32),
            np.asarray([2.0, -2.0, 5.0], dtype=np.float64),
        )
        write_triplets_matrixmarket(t, Dimensions(2, 2), src)
        out = tmp_path / "o.mtx"
        assert main(["assemble", "--input", str(src), "--output", str(out), "--prune-zeros"]) == 0
        back, _ = read_triplets_matrixmarket(out)
        assert len(back) == 1 and back.sr.tolist() == [5.0]

    def test_backend_flag(self, example_file, tmp_path):
        out = tmp_path / "o.mtx"
        try:
            rc = main(
                ["--backend", "python", "assemble", "--input", str(example_file),
                 "--output", str(out)]
            )
        finally:
            from sparseasm import backend
            backend.set_default(None)
        assert rc == 0


class TestGen:
    def test_gen_and_reload(self, tmp_path):
        out = tmp_path / "g.mtx"
        rc = main(["gen", "--size", "50", "--nnz-row", "3", "--nrep", "2",
                   "--seed", "7", "--out", str(out)])
        assert rc == 0
        t, dims = read_triplets_matrixmarket(out)
        assert len(t) == 50 * 3 * 2 and (dims.m, dims.n) == (50, 50)

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.mtx", tmp_path / "b.mtx"
        args = ["gen", "--size", "40", "--nnz-row", "2", "--seed", "5"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_size_exits_1(self, tmp_path):
        assert main(["gen", "--size", "0", "--nnz-row", "3", "--out", str(tmp_path / "g.mtx")]) == 1


class TestVerify:
    def test_file_ok(self, example_file):
        assert main(["verify", "--input", str(example_file), "--threads", "1,2,4"]) == 0

    def test_random_ok(self):
        assert main(["verify", "--random", "5", "--threads", "1,2", "--seed", "3"]) == 0

    def test_needs_input_or_random(self):
        assert main(["verify"]) == 1

    def test_corrupt_file_exits_1(self, tmp_path):
        path = tmp_path / "bad.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n")
        assert main(["verify", "--input", str(path)]) == 1

    def test_bad_thread_list_exits_2_via_argparse(self, example_file):
        with pytest.raises(SystemExit):
            main(["verify", "--input", str(example_file), "--threads", "0"])


class TestBench:
    def test_small_run(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = main(
            ["bench", "--dataset", "1", "--scale", "0.01", "--reps", "2",
             "--threads", "1,2", "--out", str(out)]
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        # header + serial + parallel(1) + parallel(2) + oracle
        assert len(lines) == 5
        assert lines[0].startswith("dataset_id,impl,threads")

    def test_cost_report(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = main(
            ["bench", "--dataset", "3", "--scale", "0.002", "--reps", "1",
             "--threads", "2", "--out", str(out), "--cost-report"]
        )
        assert rc == 0
        cost = out.with_name(out.name + ".cost.csv")
        assert cost.exists()
        text = cost.read_text()
        assert "measured-serial-small" in text and "predicted-parallel" in text

    def test_unknown_dataset_exits_via_argparse(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["bench", "--dataset", "9", "--out", str(tmp_path / "b.csv")])
