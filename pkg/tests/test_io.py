import numpy as np
import pytest

from sparseasm import AssemblyRequest, ParseError, assemble_serial
from sparseasm.bench import BenchResult
from sparseasm.instrument import predict_serial_cost
from sparseasm.mmio import (
    BENCH_CSV_COLUMNS,
    read_triplets_matrixmarket,
    write_bench_csv,
    write_cost_csv,
    write_csc_matrixmarket,
    write_triplets_matrixmarket,
)
from sparseasm.types import Dimensions, TripletList

from conftest import EXAMPLE_I, EXAMPLE_J, EXAMPLE_S, random_instance


def _triplets(i, j, s):
    return TripletList(
        np.asarray(i, dtype=np.int32),
        np.asarray(j, dtype=np.int32),
        np.asarray(s, dtype=np.float64),
    )


class TestTripletRoundTrip:
    def test_example(self, tmp_path):
        path = tmp_path / "t.mtx"
        t = _triplets(EXAMPLE_I, EXAMPLE_J, EXAMPLE_S)
        write_triplets_matrixmarket(t, Dimensions(4, 4), path)
        back, dims = read_triplets_matrixmarket(path)
        assert (dims.m, dims.n) == (4, 4)
        assert back.ii.tolist() == EXAMPLE_I
        assert back.jj.tolist() == EXAMPLE_J
        assert back.sr.tolist() == EXAMPLE_S

    def test_duplicates_preserved(self, tmp_path):
        path = tmp_path / "d.mtx"
        t = _triplets([1, 1, 1], [1, 1, 1], [1.0, 2.0, 3.0])
        write_triplets_matrixmarket(t, Dimensions(1, 1), path)
        back, _ = read_triplets_matrixmarket(path)
        assert len(back) == 3

    def test_value_bits_survive(self, tmp_path):
        path = tmp_path / "v.mtx"
        values = [0.1, 1 / 3, 1e-300, -1e300, 5.0]
        t = _triplets([1] * 5, [1, 2, 3, 4, 5], values)
        write_triplets_matrixmarket(t, Dimensions(1, 5), path)
        back, _ = read_triplets_matrixmarket(path)
        assert back.sr.tobytes() == t.sr.tobytes()

    def test_empty_body(self, tmp_path):
        path = tmp_path / "e.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n3 5 0\n")
        t, dims = read_triplets_matrixmarket(path)
        assert len(t) == 0 and (dims.m, dims.n) == (3, 5)

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.mtx"
        path.write_text(
            "%%MatrixMarket matrix coordinate real general\n"
            "% a comment\n\n2 2 1\n% another\n2 1 -3.5\n"
        )
        t, dims = read_triplets_matrixmarket(path)
        assert t.ii.tolist() == [2] and t.sr.tolist() == [-3.5]

    def test_integer_field_accepted(self, tmp_path):
        path = tmp_path / "i.mtx"
        path.write_text("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 7\n")
        t, _ = read_triplets_matrixmarket(path)
        assert t.sr.tolist() == [7.0]


class TestParseErrors:
    def test_bad_header(self, tmp_path):
        path = tmp_path / "h.mtx"
        path.write_text("not a header\n1 1 0\n")
        with pytest.raises(ParseError) as exc:
            read_triplets_matrixmarket(path)
        assert exc.value.line == 1

    def test_unsupported_format(self, tmp_path):
        path = tmp_path / "h.mtx"
        path.write_text("%%MatrixMarket matrix array real general\n")
        with pytest.raises(ParseError, match="unsupported"):
            read_triplets_matrixmarket(path)

    def test_symmetric_rejected(self, tmp_path):
        path = tmp_path / "h.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 1.0\n")
        with pytest.raises(ParseError):
            read_triplets_matrixmarket(path)

    def test_malformed_entry_reports_line(self, tmp_path):
        path = tmp_path / "m.mtx"
        path.write_text(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 x 3\n"
        )
        with pytest.raises(ParseError) as exc:
            read_triplets_matrixmarket(path)
        assert exc.value.line == 4

    def test_entry_count_mismatch(self, tmp_path):
        path = tmp_path / "n.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n")
        with pytest.raises(ParseError, match="promised 3"):
            read_triplets_matrixmarket(path)

    def test_entry_beyond_declared_size(self, tmp_path):
        path = tmp_path / "o.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n")
        with pytest.raises(ParseError, match="beyond"):
            read_triplets_matrixmarket(path)

    def test_missing_size_line(self, tmp_path):
        path = tmp_path / "s.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n")
        with pytest.raises(ParseError, match="size"):
            read_triplets_matrixmarket(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "z.mtx"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            read_triplets_matrixmarket(path)


class TestCscWriter:
    def test_example_layout(self, tmp_path):
        path = tmp_path / "out.mtx"
        out = assemble_serial(AssemblyRequest.from_raw(EXAMPLE_I, EXAMPLE_J, EXAMPLE_S))
        write_csc_matrixmarket(out, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "%%MatrixMarket matrix coordinate real general"
        assert lines[1] == "4 4 10"
        # column-major, row-ascending: first entry is (1,1)=10, last (4,4)=5
        assert lines[2] == "1 1 10"
        assert lines[-1] == "4 4 5"
        assert len(lines) == 12

    def test_empty_matrix(self, tmp_path):
        path = tmp_path / "empty.mtx"
        out = assemble_serial(AssemblyRequest.from_raw([], [], [], m=3, n=2))
        write_csc_matrixmarket(out, path)
        assert path.read_text().splitlines()[1] == "3 2 0"

    @pytest.mark.parametrize("seed", range(10))
    def test_reassembly_round_trip(self, seed, tmp_path):
        # write the assembled matrix, read it back as triplets (now
        # duplicate-free), reassemble: jc/ir/pr must be bit-identical
        req = random_instance(seed, max_len=1200, max_dim=80)
        first = assemble_serial(req)
        path = tmp_path / f"rt{seed}.mtx"
        write_csc_matrixmarket(first, path)
        t, dims = read_triplets_matrixmarket(path)
        again = assemble_serial(AssemblyRequest(t, dims))
        assert first.same_as(again)


class TestCsvReports:
    def test_bench_csv(self, tmp_path):
        path = tmp_path / "b.csv"
        rows = [
            BenchResult("1", "serial", 1, 0.5, 0.4, 40, 100, 10, 10, 90, 1.0),
            BenchResult("1", "parallel", 4, 0.2, 0.18, 40, 100, 10, 10, 90, 2.5),
        ]
        write_bench_csv(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(BENCH_CSV_COLUMNS)
        assert len(lines) == 3
        assert lines[2].startswith("1,parallel,4,0.2,")

    def test_bench_csv_empty(self, tmp_path):
        path = tmp_path / "b0.csv"
        write_bench_csv([], path)
        assert path.read_text().splitlines() == [",".join(BENCH_CSV_COLUMNS)]

    def test_cost_csv(self, tmp_path):
        path = tmp_path / "c.csv"
        write_cost_csv([("pred", predict_serial_cost(13, 4, 4, 10))], path)
        lines = path.read_text().splitlines()
        # header + 4 phases + 1 total
        assert len(lines) == 6
        assert lines[-1].split(",")[1] == "total"
        assert lines[-1].split(",")[2] == str(13 * 13 + 2 * 4 + 4)
