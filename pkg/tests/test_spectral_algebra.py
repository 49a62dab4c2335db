import math

import numpy as np
import pytest

from matrixmech.errors import DisconnectedGraphError, InvalidLevelError, JumpRangeError
from matrixmech.spectral_algebra import (
    FrequencyTable,
    RydbergModel,
    balmer_frequency,
    balmer_table,
    check_ritz,
    fit_term_values,
    overtone_ratio,
    read_line_list,
)


def _brute_force_worst(w):
    """Independent exhaustive triple scan (plain loops)."""
    n = w.shape[0]
    worst, triple = -1.0, (0, 0, 0)
    for m in range(n):
        for k in range(n):
            for p in range(n):
                v = abs(w[m, k] + w[k, p] - w[m, p])
                if v > worst:
                    worst, triple = v, (m, k, p)
    return worst, triple


class TestCheckRitz:
    def test_generated_table_closes(self):
        rng = np.random.default_rng(0)
        table = FrequencyTable.from_term_values(rng.uniform(0.0, 1.0, size=9))
        report = check_ritz(table)
        assert report.ok
        assert report.worst_violation <= 1e-15

    def test_two_by_two_antisymmetric(self):
        report = check_ritz(FrequencyTable(np.array([[0.0, 1.0], [-1.0, 0.0]])))
        assert report.ok

    def test_corrupted_entry_located(self):
        w = FrequencyTable.from_term_values([0.0, 1.0, 3.0]).omega.copy()
        w[0, 2] += 0.1
        w[2, 0] -= 0.1
        report = check_ritz(FrequencyTable(w), tol=1e-6)
        assert not report.ok
        assert report.worst_violation == pytest.approx(0.1, abs=1e-12)
        assert report.worst_triple == (0, 1, 2)

    def test_matches_brute_force_scan(self):
        rng = np.random.default_rng(3)
        w = rng.normal(size=(6, 6))
        report = check_ritz(FrequencyTable(w), tol=0.0)
        worst, triple = _brute_force_worst(w)
        assert report.worst_violation == pytest.approx(worst, rel=1e-15)
        assert report.worst_triple == triple

    def test_negative_tol_rejected(self):
        with pytest.raises(ValueError):
            check_ritz(FrequencyTable(np.zeros((2, 2))), tol=-1.0)


class TestFitTermValues:
    def test_exact_inversion(self):
        table = FrequencyTable.from_term_values([0.0, 1.0, 3.0])
        fit = fit_term_values(table)
        assert np.allclose(fit.terms, [0.0, 1.0, 3.0], atol=1e-12)
        assert fit.residual <= 1e-12

    def test_random_round_trip_gauge_pinned(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            c = rng.uniform(-10, 10, size=8)
            c -= c[0]
            fit = fit_term_values(FrequencyTable.from_term_values(c))
            assert fit.gauge == 0
            assert np.max(np.abs(fit.terms - c)) <= 1e-10

    def test_partial_connected_mask(self):
        c = np.array([0.0, 2.0, -1.0, 5.0])
        table = FrequencyTable.from_term_values(c)
        fit = fit_term_values(table, mask={(0, 1), (1, 2), (3, 2)})
        assert np.max(np.abs(fit.terms - c)) <= 1e-10

    def test_disconnected_mask(self):
        table = FrequencyTable.from_term_values([0.0, 1.0, 3.0])
        with pytest.raises(DisconnectedGraphError):
            fit_term_values(table, mask={(0, 1)})

    def test_empty_mask(self):
        table = FrequencyTable.from_term_values([0.0, 1.0])
        with pytest.raises(DisconnectedGraphError):
            fit_term_values(table, mask=set())

    def test_json_payload(self):
        fit = fit_term_values(FrequencyTable.from_term_values([0.0, 1.0]))
        obj = fit.to_json_obj()
        assert obj["gauge_index"] == 0
        assert obj["terms"] == pytest.approx([0.0, 1.0], abs=1e-12)
        assert isinstance(obj["residual"], float)


class TestBalmer:
    model = RydbergModel(rydberg=1.0973731568e7, light_speed=2.99792458e8)

    def test_diagonal_zero(self):
        assert balmer_frequency(self.model, 5, 5) == 0.0

    def test_antisymmetry(self):
        assert balmer_frequency(self.model, 2, 7) == -balmer_frequency(self.model, 7, 2)

    def test_h_alpha_scale(self):
        # oracle: direct scalar arithmetic 2*pi*R*c*(1/4 - 1/9)
        expected = 2 * math.pi * 1.0973731568e7 * 2.99792458e8 * (0.25 - 1.0 / 9.0)
        assert balmer_frequency(self.model, 2, 3) == pytest.approx(expected, rel=1e-15)

    def test_level_validation(self):
        with pytest.raises(InvalidLevelError):
            balmer_frequency(self.model, 0, 3)
        with pytest.raises(InvalidLevelError):
            balmer_frequency(self.model, 2, -1)

    def test_table_size_one(self):
        table = balmer_table(self.model, 1)
        assert table.size == 1
        assert table.omega[0, 0] == 0.0

    def test_table_is_ritz_consistent(self):
        table = balmer_table(self.model, 8)
        report = check_ritz(table)
        assert report.ok
        assert table.max_diagonal() == 0.0
        assert table.max_antisymmetry_violation() == 0.0

    def test_table_matches_frequency(self):
        table = balmer_table(self.model, 4)
        # index of level 2 is 1, index of level 3 is 2
        assert table.omega[1, 2] == pytest.approx(balmer_frequency(self.model, 2, 3), rel=1e-15)


class TestOvertoneRatio:
    model = RydbergModel()

    def test_large_level_limit(self):
        assert abs(overtone_ratio(self.model, 10**6, 1) - 1.0) <= 1e-5

    def test_exact_value_at_hundred(self):
        # oracle: the closed form (1 - k/2m) / (1 - 2k/m + k^2/m^2), which is
        # exact algebra for the jump frequency over k * |dC/dm|
        m, k = 100, 1
        expected = (1 - k / (2 * m)) / (1 - 2 * k / m + (k / m) ** 2)
        assert overtone_ratio(self.model, m, k) == pytest.approx(expected, rel=1e-13)

    def test_upward_jump_tends_to_one(self):
        assert abs(overtone_ratio(self.model, 100, -1) - 1.0) <= 0.02
        assert abs(overtone_ratio(self.model, 10**5, -1) - 1.0) <= 1e-4

    def test_bound_over_sweep(self):
        # |ratio - 1| <= 3|k|/m for m >= 50, |k| <= 5
        for m in (50, 75, 100, 200, 400):
            for k in (-5, -3, -1, 1, 2, 3, 4, 5):
                ratio = overtone_ratio(self.model, m, k)
                assert abs(ratio - 1.0) <= 3.0 * abs(k) / m

    def test_brute_force_from_term_values(self):
        # oracle: assemble the ratio from raw term values, no shared code path
        m, k = 64, 2
        r, c = self.model.rydberg, self.model.light_speed
        line = 2 * math.pi * r * c * (1.0 / (m - k) ** 2 - 1.0 / m**2)
        fundamental = 4 * math.pi * r * c / m**3
        assert overtone_ratio(self.model, m, k) == pytest.approx(line / (k * fundamental), rel=1e-14)

    def test_jump_validation(self):
        with pytest.raises(JumpRangeError):
            overtone_ratio(self.model, 10, 0)
        with pytest.raises(JumpRangeError):
            overtone_ratio(self.model, 10, 10)
        with pytest.raises(JumpRangeError):
            overtone_ratio(self.model, 10, 2.5)
        with pytest.raises(InvalidLevelError):
            overtone_ratio(self.model, 0, 1)


class TestLineListIO:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "lines.csv"
        rows = [(0, 1, 2.5), (1, 2, -0.125), (2, 0, 7.0)]
        path.write_text("m,n,omega\n" + "\n".join(f"{m},{n},{w!r}" for m, n, w in rows) + "\n")
        table, mask = read_line_list(path)
        assert table.size == 3
        assert mask == {(0, 1), (1, 2), (2, 0)}
        assert table.omega[1, 2] == -0.125

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "lines.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_line_list(path)
