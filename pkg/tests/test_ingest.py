import pytest

from fairselect.errors import IngestError
from fairselect.ingest import IngestionSpec, ingest_csv


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def spec_for(path, **kw):
    base = dict(
        path=path,
        score_columns=("a", "b"),
        group_column="grp",
        protected_value="P",
    )
    base.update(kw)
    return IngestionSpec(**base)


class TestNormalization:
    def test_min_max_endpoints(self, tmp_path):
        path = write(tmp_path, "two.csv", "a,b,grp\n2,1,P\n4,3,Q\n")
        res = ingest_csv(spec_for(path))
        assert [c.scores for c in res.dataset.candidates] == [(0.0, 0.0), (1.0, 1.0)]

    def test_idempotent_on_normalized_input(self, tmp_path):
        path = write(tmp_path, "norm.csv", "a,b,grp\n0,0.25,P\n0.5,1,Q\n1,0,Q\n")
        res = ingest_csv(spec_for(path))
        again = write(
            tmp_path,
            "again.csv",
            "a,b,grp\n"
            + "\n".join(
                f"{c.scores[0]},{c.scores[1]},{'P' if c.group == 'P' else 'Q'}"
                for c in res.dataset.candidates
            )
            + "\n",
        )
        res2 = ingest_csv(spec_for(again))
        assert [c.scores for c in res.dataset.candidates] == [
            c.scores for c in res2.dataset.candidates
        ]

    def test_constant_column_warns_and_zeroes(self, tmp_path):
        path = write(tmp_path, "const.csv", "a,b,grp\n3,1,P\n3,2,Q\n")
        res = ingest_csv(spec_for(path))
        assert any("constant" in w for w in res.warnings)
        assert all(c.scores[0] == 0.0 for c in res.dataset.candidates)

    def test_snapping_resolution(self, tmp_path):
        path = write(tmp_path, "snap.csv", "a,b,grp\n0,0,P\n1,3,Q\n2,7,Q\n")
        res = ingest_csv(spec_for(path, snap_decimals=2))
        assert res.dataset.grid_decimals == 2
        assert res.dataset.candidates[1].scores == (0.5, 0.43)


class TestRowHandling:
    def test_bad_rows_dropped_and_counted(self, tmp_path):
        path = write(
            tmp_path, "bad.csv",
            "a,b,grp\n1,2,P\nx,2,Q\n2,,Q\n3,4,\n4,5,Q\n",
        )
        res = ingest_csv(spec_for(path))
        assert res.rows_read == 5
        assert res.rows_dropped == 3
        assert res.dataset.n == 2

    def test_missing_column_error(self, tmp_path):
        path = write(tmp_path, "cols.csv", "a,grp\n1,P\n")
        with pytest.raises(IngestError):
            ingest_csv(spec_for(path))

    def test_custom_delimiter(self, tmp_path):
        path = write(tmp_path, "semi.csv", "a;b;grp\n1;2;P\n3;4;Q\n")
        res = ingest_csv(spec_for(path, delimiter=";"))
        assert res.dataset.n == 2


class TestDerivedColumns:
    def test_date_difference_in_days(self, tmp_path):
        path = write(
            tmp_path, "jail.csv",
            "cin,cout,a,grp\n"
            "2013-01-01 00:00:00,2013-01-11 00:00:00,1,P\n"
            "2013-02-01 00:00:00,2013-02-03 12:00:00,2,Q\n"
            "2013-03-05 00:00:00,2013-03-05 00:00:00,3,Q\n",
        )
        spec = IngestionSpec(
            path=path,
            score_columns=("days", "a"),
            group_column="grp",
            protected_value="P",
            derived_columns=("days=cout-cin",),
        )
        res = ingest_csv(spec)
        # spans 10, 2.5, 0 days -> normalized 1, 0.25, 0
        assert [c.scores[0] for c in res.dataset.candidates] == [1.0, 0.25, 0.0]

    def test_numeric_difference(self, tmp_path):
        path = write(tmp_path, "num.csv", "x,y,grp\n5,1,P\n3,1,Q\n1,1,Q\n")
        spec = IngestionSpec(
            path=path,
            score_columns=("diff",),
            group_column="grp",
            protected_value="P",
            derived_columns=("diff=x-y",),
        )
        res = ingest_csv(spec)
        assert [c.scores[0] for c in res.dataset.candidates] == [1.0, 0.5, 0.0]

    def test_malformed_derived_spec(self, tmp_path):
        path = write(tmp_path, "m.csv", "a,b,grp\n1,2,P\n")
        with pytest.raises(IngestError):
            ingest_csv(spec_for(path, derived_columns=("oops",)))


class TestShares:
    def test_protected_share(self, tmp_path):
        rows = ["a,b,grp"]
        for i in range(200):
            rows.append(f"{i},{200 - i},{'P' if i % 4 == 0 else 'Q'}")
        path = write(tmp_path, "share.csv", "\n".join(rows) + "\n")
        res = ingest_csv(spec_for(path))
        assert res.protected_share == pytest.approx(0.25)
