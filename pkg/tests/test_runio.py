import hashlib
import os

import numpy as np
import pytest

from thetasync import (ConfigurationError, ControlSignal, resolve_config,
                       sample_initial)
from thetasync.grids import PhysicalField
from thetasync.runio import (CONTROL_HEADER, DENSITY_HEADER, PARTICLES_HEADER,
                             TARGET_HEADER, fmt, read_control, read_density,
                             read_particles, read_target, snapshot_times,
                             time_tag, write_control, write_density,
                             write_manifest, write_particles, write_rows)
from thetasync.config import parse_config_file
from thetasync.densities import paper_cossin2_clipped

from conftest import make_grid


def file_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestFormatting:
    def test_fmt_values(self):
        assert fmt(True) == "true"
        assert fmt(False) == "false"
        assert fmt(3) == "3"
        assert fmt(np.int64(-7)) == "-7"
        assert fmt(0.1) == "0.1"
        assert fmt(np.float64(1.0) / 3.0) == "0.3333333333333333"
        assert float(fmt(np.pi)) == np.pi

    def test_time_tag(self):
        assert time_tag(0.0) == "0"
        assert time_tag(3.0) == "3"
        assert time_tag(2.5) == "2.5"
        assert time_tag(6.0) == "6"

    def test_snapshot_times(self):
        g = make_grid(horizon=6.0, n_steps=60)
        assert snapshot_times(g) == (0.0, 3.0, 6.0)


class TestControlRoundTrip:
    def test_bitwise_round_trip(self, tmp_path):
        g = make_grid(n_steps=60)
        rng = np.random.Generator(np.random.Philox(31))
        u = ControlSignal(g, rng.normal(size=g.n_steps + 1))
        path = write_control(str(tmp_path), u)
        assert os.path.basename(path) == "control.csv"
        again = read_control(path, g)
        assert np.array_equal(again.samples, u.samples)

    def test_header_checked(self, tmp_path):
        g = make_grid(n_steps=10)
        path = str(tmp_path / "control.csv")
        write_rows(path, ["time", "u"], zip(g.times, np.zeros(11)))
        with pytest.raises(ConfigurationError, match="expected header t,u"):
            read_control(path, g)

    def test_row_count_checked(self, tmp_path):
        g = make_grid(n_steps=10)
        path = str(tmp_path / "control.csv")
        write_rows(path, CONTROL_HEADER, zip(g.times[:-1], np.zeros(10)))
        with pytest.raises(ConfigurationError, match="expected 11 samples"):
            read_control(path, g)

    def test_time_nodes_checked(self, tmp_path):
        g = make_grid(n_steps=10)
        times = g.times.copy()
        times[3] += 0.01
        path = str(tmp_path / "control.csv")
        write_rows(path, CONTROL_HEADER, zip(times, np.zeros(11)))
        with pytest.raises(ConfigurationError, match="time column"):
            read_control(path, g)

    def test_non_numeric_cell(self, tmp_path):
        g = make_grid(n_steps=10)
        path = str(tmp_path / "control.csv")
        rows = [[fmt(t), "fast"] for t in g.times]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("t,u\n")
            fh.writelines(",".join(r) + "\n" for r in rows)
        with pytest.raises(ConfigurationError, match="non-numeric"):
            read_control(path, g)

    def test_missing_file(self, tmp_path):
        g = make_grid()
        with pytest.raises(ConfigurationError, match="cannot read table"):
            read_control(str(tmp_path / "none.csv"), g)


class TestDensityRoundTrip:
    def test_bitwise_round_trip(self, tmp_path):
        g = make_grid(n_modes=16, n_eta=4)
        rng = np.random.Generator(np.random.Philox(32))
        field = PhysicalField(g, rng.normal(size=g.field_shape()))
        path = write_density(str(tmp_path), 0.5, field)
        assert os.path.basename(path) == "density_t0.5.csv"
        again = read_density(path, g)
        assert np.array_equal(again.values, field.values)

    def test_row_count_checked(self, tmp_path):
        g = make_grid(n_modes=16, n_eta=4)
        path = str(tmp_path / "density_t0.csv")
        rows = [(0.0, 0.0, 1.0)] * 5
        write_rows(path, DENSITY_HEADER, rows)
        with pytest.raises(ConfigurationError, match="expected 64 rows"):
            read_density(path, g)

    def test_node_columns_checked(self, tmp_path):
        g = make_grid(n_modes=16, n_eta=4)
        field = PhysicalField(g, np.ones(g.field_shape()))
        path = write_density(str(tmp_path), 0.0, field)
        text = file_bytes(path).decode().splitlines()
        cells = text[1].split(",")
        cells[0] = "0.5"  # bend the first theta node
        text[1] = ",".join(cells)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(text) + "\n")
        with pytest.raises(ConfigurationError, match="theta column"):
            read_density(path, g)


class TestTargetAndParticles:
    def test_target_round_trip(self, tmp_path):
        g = make_grid(n_eta=5)
        values = np.linspace(0.0, np.pi, 5)
        path = str(tmp_path / "target.csv")
        write_rows(path, TARGET_HEADER, zip(g.eta, values))
        tgt = read_target(path, g)
        assert np.array_equal(tgt.values, values)

    def test_target_eta_nodes_checked(self, tmp_path):
        g = make_grid(n_eta=5)
        path = str(tmp_path / "target.csv")
        write_rows(path, TARGET_HEADER,
                   zip(g.eta + 0.01, np.zeros(5)))
        with pytest.raises(ConfigurationError, match="eta column"):
            read_target(path, g)

    def test_target_row_count_checked(self, tmp_path):
        g = make_grid(n_eta=5)
        path = str(tmp_path / "target.csv")
        write_rows(path, TARGET_HEADER, zip(g.eta[:3], np.zeros(3)))
        with pytest.raises(ConfigurationError, match="expected 5 eta rows"):
            read_target(path, g)

    def test_particles_round_trip(self, tmp_path):
        g = make_grid(n_modes=64, n_eta=11)
        ens = sample_initial(paper_cossin2_clipped(g), 777, seed=5)
        path = write_particles(str(tmp_path), ens)
        again = read_particles(path)
        assert np.array_equal(again.thetas, ens.thetas)
        assert np.array_equal(again.etas, ens.etas)

    def test_empty_particles_rejected(self, tmp_path):
        path = str(tmp_path / "particles.csv")
        write_rows(path, PARTICLES_HEADER, [])
        with pytest.raises(ConfigurationError, match="no particle rows"):
            read_particles(path)


class TestManifest:
    def test_layout_and_round_trip(self, tmp_path):
        config = resolve_config(
            preset="desk", overrides={"n_steps": "600",
                                      "storage_stride": "10", "seed": "4"})
        path = write_manifest(str(tmp_path), config, "optimize", "0.1.0")
        lines = file_bytes(path).decode().splitlines()
        assert lines[0] == "subcommand=optimize"
        assert lines[1] == "version=0.1.0"
        keys = [line.split("=", 1)[0] for line in lines[2:]]
        assert keys == sorted(keys)
        again = resolve_config(file_values=parse_config_file(path))
        assert again == config

    def test_identical_configs_identical_bytes(self, tmp_path):
        config = resolve_config(overrides={"alpha": "0.25"})
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        p1 = write_manifest(str(tmp_path / "a"), config, "compare", "0.1.0")
        p2 = write_manifest(str(tmp_path / "b"), config, "compare", "0.1.0")
        assert hashlib.sha256(file_bytes(p1)).digest() == \
            hashlib.sha256(file_bytes(p2)).digest()
