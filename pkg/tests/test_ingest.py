import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from agroyield import ingest, schema
from agroyield.errors import EmptyDataset, EmptyInput, HeaderMismatch, TooFewRecords
from agroyield.ingest import (
    CSV_HEADER,
    Dataset,
    SplitConfig,
    apply_normalizer,
    deduplicate,
    drop_invalid,
    fit_normalizer,
    normalize_features,
    parse_csv,
    record_to_row,
    split,
    write_csv,
)
from agroyield.schema import Weather
from helpers import make_record


def csv_text(records):
    out = io.StringIO()
    out.write(",".join(CSV_HEADER) + "\n")
    for r in records:
        out.write(",".join(record_to_row(r)) + "\n")
    return out.getvalue()


class TestParseCsv:
    def test_table1_row_round_trip(self):
        r = make_record()
        ds = parse_csv(csv_text([r]))
        assert len(ds.records) == 1
        got = ds.records[0]
        assert got.weather.avg_rainfall == 2385.0
        assert got.weather.humidity == 71.0
        assert got.fertilizer.urea == 25967.0
        assert got == r

    def test_header_only_gives_empty_dataset(self):
        ds = parse_csv(",".join(CSV_HEADER) + "\n")
        assert ds.records == []
        assert ds.cleaning_log == []

    def test_non_numeric_field_logged_and_skipped(self):
        text = csv_text([make_record()])
        text = text.replace("71,25967", "soggy,25967")
        ds = parse_csv(text)
        assert ds.records == []
        assert ds.cleaning_log == [(0, "parse failure")]

    def test_header_mismatch(self):
        with pytest.raises(HeaderMismatch):
            parse_csv("a,b,c\n1,2,3\n")

    def test_reordered_header_rejected(self):
        cols = list(CSV_HEADER)
        cols[0], cols[1] = cols[1], cols[0]
        with pytest.raises(HeaderMismatch):
            parse_csv(",".join(cols) + "\n")

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            parse_csv("")

    def test_wrong_field_count_logged(self):
        text = csv_text([make_record()])
        lines = text.splitlines()
        lines[1] = lines[1] + ",999"
        ds = parse_csv("\n".join(lines) + "\n")
        assert ds.cleaning_log == [(0, "parse failure")]

    def test_write_then_parse_is_identity(self, tmp_path):
        records = [make_record(year=2008 + i, yield_t_ha=1.0 + i)
                   for i in range(5)]
        path = tmp_path / "d.csv"
        write_csv(Dataset(records=records), path)
        assert ingest.load_csv(path).records == records


class TestDeduplicate:
    def test_exact_duplicate_removed(self):
        r1, r2 = make_record(), make_record(year=2009)
        ds = deduplicate(Dataset(records=[r1, r1, r2]))
        assert ds.records == [r1, r2]
        assert ds.cleaning_log == [(1, "duplicate")]

    def test_distinct_records_unchanged(self):
        r1, r2 = make_record(), make_record(year=2009)
        ds = deduplicate(Dataset(records=[r1, r2]))
        assert ds.records == [r1, r2]

    def test_idempotent(self):
        d = Dataset(records=[make_record(), make_record(), make_record(year=2010)])
        once = deduplicate(d)
        twice = deduplicate(once)
        assert twice.records == once.records

    @given(st.lists(st.sampled_from([2008, 2009, 2010, 2011]), max_size=20))
    def test_never_grows_and_idempotent(self, years):
        d = Dataset(records=[make_record(year=y) for y in years])
        once = deduplicate(d)
        assert len(once.records) <= len(d.records)
        assert deduplicate(once).records == once.records


class TestDropInvalid:
    def test_inverted_temps_removed_with_reason(self):
        bad = make_record(weather=Weather(2385.0, 20.0, 30.0, 71.0))
        ds = drop_invalid(Dataset(records=[bad]))
        assert ds.records == []
        assert "min_temp < max_temp violated" in ds.cleaning_log[0][1]

    def test_all_valid_is_noop(self):
        records = [make_record(year=2008 + i) for i in range(3)]
        ds = drop_invalid(Dataset(records=records))
        assert ds.records == records
        assert ds.cleaning_log == []

    def test_mixed_counts(self):
        good = [make_record(year=2008 + i) for i in range(3)]
        bad = [make_record(weather=Weather(0.0, 20.0, 30.0, 71.0), year=y)
               for y in (2014, 2015)]
        ds = drop_invalid(Dataset(records=good + bad))
        assert len(ds.records) == 3
        assert len(ds.cleaning_log) == 2


def rainfall_dataset(values):
    return Dataset(records=[
        make_record(weather=Weather(v, 34.0, 12.0, 71.0), year=2008 + i)
        for i, v in enumerate(values)
    ])


class TestNormalizer:
    def test_table1_rainfall_min_max(self):
        norm = fit_normalizer(rainfall_dataset([2385.0, 1930.0, 1523.0]))
        i = schema.schema_columns().index("avg_rainfall")
        assert norm.column_mins[i] == 1523.0
        assert norm.column_maxs[i] == 2385.0

    def test_constant_column(self):
        norm = fit_normalizer(rainfall_dataset([5.0, 5.0, 5.0]))
        i = schema.schema_columns().index("avg_rainfall")
        assert norm.column_mins[i] == norm.column_maxs[i] == 5.0

    def test_single_record_min_equals_max(self):
        norm = fit_normalizer(rainfall_dataset([1930.0]))
        assert np.all(norm.column_mins == norm.column_maxs)

    def test_empty_dataset_raises(self):
        with pytest.raises(EmptyDataset):
            fit_normalizer(Dataset(records=[]))

    def test_endpoints_and_interior_value(self):
        train = rainfall_dataset([2385.0, 1930.0, 1523.0])
        norm = fit_normalizer(train)
        data = apply_normalizer(norm, train)
        i = schema.schema_columns().index("avg_rainfall")
        col = sorted(data.x[:, i])
        assert col[0] == 0.0
        assert col[-1] == 1.0
        # (1930 - 1523) / (2385 - 1523), by hand
        assert col[1] == pytest.approx(407.0 / 862.0, abs=1e-12)

    def test_constant_column_maps_to_zero(self):
        train = rainfall_dataset([5.0, 5.0])
        norm = fit_normalizer(train)
        data = apply_normalizer(norm, train)
        i = schema.schema_columns().index("avg_rainfall")
        assert np.all(data.x[:, i] == 0.0)

    def test_out_of_range_values_clipped(self):
        train = rainfall_dataset([1523.0, 2385.0])
        norm = fit_normalizer(train)
        test = ingest.feature_matrix(rainfall_dataset([100.0, 9000.0]).records)
        out = normalize_features(norm, test)
        i = schema.schema_columns().index("avg_rainfall")
        assert out[0, i] == 0.0
        assert out[1, i] == 1.0

    def test_indicator_columns_pass_through(self):
        records = [make_record(district=d, year=2008 + i)
                   for i, d in enumerate(schema.District)]
        ds = Dataset(records=records)
        norm = fit_normalizer(ds)
        data = apply_normalizer(norm, ds)
        raw = ingest.feature_matrix(records)
        assert np.array_equal(data.x[:, -5:], raw[:, -5:])

    def test_train_columns_hit_0_and_1(self):
        ds = rainfall_dataset([1000.0, 1500.0, 2000.0, 2500.0])
        norm = fit_normalizer(ds)
        data = apply_normalizer(norm, ds)
        span = norm.column_maxs - norm.column_mins
        for j in range(data.x.shape[1]):
            if span[j] == 0 or schema.schema_columns()[j].startswith("district_"):
                continue
            assert abs(data.x[:, j].min()) <= 1e-12
            assert abs(data.x[:, j].max() - 1.0) <= 1e-12

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30, unique=True))
    def test_order_preserving_per_column(self, values):
        lo, hi = min(values), max(values)
        norm_col = [(v - lo) / (hi - lo) for v in values]
        order = np.argsort(values)
        assert all(norm_col[order[k]] <= norm_col[order[k + 1]]
                   for k in range(len(values) - 1))


class TestSplit:
    def make_dataset(self, n):
        return Dataset(records=[make_record(year=1900 + i) for i in range(n)])

    def test_sizes_floor_rule(self):
        train, test = split(self.make_dataset(10), SplitConfig(0.8, seed=1))
        assert (len(train.records), len(test.records)) == (8, 2)

    def test_same_seed_identical(self):
        ds = self.make_dataset(20)
        a = split(ds, SplitConfig(0.8, seed=42))
        b = split(ds, SplitConfig(0.8, seed=42))
        assert a[0].records == b[0].records
        assert a[1].records == b[1].records

    def test_different_seed_differs(self):
        ds = self.make_dataset(50)
        a = split(ds, SplitConfig(0.8, seed=1))
        b = split(ds, SplitConfig(0.8, seed=2))
        assert a[0].records != b[0].records

    def test_partition(self):
        ds = self.make_dataset(31)
        train, test = split(ds, SplitConfig(0.8, seed=3))
        combined = sorted(r.year for r in train.records + test.records)
        assert combined == sorted(r.year for r in ds.records)

    def test_too_few_records(self):
        with pytest.raises(TooFewRecords):
            split(self.make_dataset(1), SplitConfig(0.8, seed=0))

    def test_ratio_bounds(self):
        with pytest.raises(ValueError):
            SplitConfig(train_ratio=1.5)
