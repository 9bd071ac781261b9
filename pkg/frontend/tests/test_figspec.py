import pytest

from opjump_plots.figspec import (
    FigureSpec,
    MissingColumnError,
    PanelSpec,
    SeriesSpec,
    fig1_spec,
    fig2_spec,
    read_table,
    series_cells,
)


def make_csv(path, text):
    path.write_text(text)
    return str(path)


TAYLOR_TEXT = (
    "n,alpha_iter,alpha_taylor2,alpha_taylor3,"
    "rescaled_iter,rescaled_taylor2,rescaled_taylor3\n"
    "1,0.1,0.11,0.09,0.2,0.22,0.18\n"
    "2,0.3,0.31,0.29,0.4,0.42,0.38\n"
)
ASYM_TEXT = "n,alpha_est,r_est,alpha_est_rescaled\n1,0.1,-0.3,0.2\n2,0.05,0.2,0.1\n"
SCAN_TEXT = (
    "xjump,n,alpha,alpha_rescaled,r\n"
    "-1.0,2,0.1,0.3,0.0\n"
    "-1.0,50,0.2,0.6,0.1\n"
    "1.0,2,0.15,0.45,0.0\n"
    "1.0,50,0.25,0.75,0.1\n"
)


def test_series_spec_rejects_unknown_style():
    with pytest.raises(ValueError, match="style"):
        SeriesSpec("a.csv", "x", "y", label="s", style="dots")


def test_panel_requires_series():
    with pytest.raises(ValueError, match="no series"):
        PanelSpec("top", ())


def test_figure_spec_rejects_empty_panel_list():
    with pytest.raises(ValueError, match="panel list is empty"):
        FigureSpec(
            mode="fig2", csv_paths=("a.csv",), panels=(),
            xlabel="x", ylabel="y", out_path="out.svg",
        )


def test_figure_spec_rejects_bad_mode_and_no_inputs():
    series = (SeriesSpec("a.csv", "x", "y", label="s"),)
    panel = PanelSpec("p", series)
    with pytest.raises(ValueError, match="mode"):
        FigureSpec("fig3", ("a.csv",), (panel,), "x", "y", "out.svg")
    with pytest.raises(ValueError, match="no input"):
        FigureSpec("fig1", (), (panel,), "x", "y", "out.svg")


def test_read_table(tmp_path):
    path = make_csv(tmp_path / "t.csv", SCAN_TEXT)
    header, rows = read_table(path)
    assert header == ["xjump", "n", "alpha", "alpha_rescaled", "r"]
    assert len(rows) == 4
    assert rows[0]["alpha_rescaled"] == "0.3"
    with pytest.raises(FileNotFoundError):
        read_table(tmp_path / "absent.csv")
    empty = make_csv(tmp_path / "e.csv", "")
    with pytest.raises(ValueError, match="empty"):
        read_table(empty)


def test_series_cells_where_filter_and_blank_drop(tmp_path):
    text = (
        "xjump,n,alpha,alpha_rescaled,r\n"
        "1.0,2,0.1,0.3,0.0\n"
        "2.0,2,,,\n"          # breakdown row: blank cells
        "3.0,2,0.2,0.6,0.1\n"
        "1.0,50,0.9,0.8,0.7\n"
    )
    path = make_csv(tmp_path / "s.csv", text)
    header, rows = read_table(path)
    spec = SeriesSpec(path, "xjump", "alpha_rescaled", label="s",
                      where=("n", "2"))
    assert series_cells(spec, header, rows) == [("1.0", "0.3"), ("3.0", "0.6")]
    # no filter: blank row still skipped, degree-50 row kept
    spec_all = SeriesSpec(path, "xjump", "alpha_rescaled", label="s")
    assert len(series_cells(spec_all, header, rows)) == 3


def test_series_cells_missing_column_names_it(tmp_path):
    path = make_csv(tmp_path / "s.csv", SCAN_TEXT)
    header, rows = read_table(path)
    spec = SeriesSpec(path, "xjump", "nope", label="s")
    with pytest.raises(MissingColumnError) as err:
        series_cells(spec, header, rows)
    assert err.value.column == "nope"
    assert "nope" in str(err.value) and "s.csv" in str(err.value)


def test_fig1_spec_layout(tmp_path):
    t1 = make_csv(tmp_path / "taylor_a.csv", TAYLOR_TEXT)
    t2 = make_csv(tmp_path / "taylor_b.csv", TAYLOR_TEXT)
    asym = make_csv(tmp_path / "curve.csv", ASYM_TEXT)
    spec = fig1_spec([t1, t2, asym], "out.svg")
    assert spec.mode == "fig1"
    assert [p.title for p in spec.panels] == ["taylor_a", "taylor_b"]
    # first panel gets the asymptote overlay, second does not
    assert [s.label for s in spec.panels[0].series] == [
        "iterated", "taylor order 2", "taylor order 3", "asymptote",
    ]
    assert [s.label for s in spec.panels[1].series] == [
        "iterated", "taylor order 2", "taylor order 3",
    ]
    assert spec.panels[0].series[0].style == "points"
    assert spec.panels[0].series[3].path == asym
    assert spec.panels[0].series[3].ycol == "alpha_est_rescaled"


def test_fig1_spec_rejects_scan_table(tmp_path):
    scan = make_csv(tmp_path / "scan.csv", SCAN_TEXT)
    with pytest.raises(MissingColumnError) as err:
        fig1_spec([scan], "out.svg")
    assert err.value.column == "rescaled_iter"


def test_fig1_spec_needs_a_taylor_table(tmp_path):
    asym = make_csv(tmp_path / "curve.csv", ASYM_TEXT)
    with pytest.raises(ValueError, match="at least one Taylor"):
        fig1_spec([asym], "out.svg")


def test_fig1_spec_at_most_one_asymptote(tmp_path):
    t = make_csv(tmp_path / "taylor.csv", TAYLOR_TEXT)
    a1 = make_csv(tmp_path / "c1.csv", ASYM_TEXT)
    a2 = make_csv(tmp_path / "c2.csv", ASYM_TEXT)
    with pytest.raises(ValueError, match="at most one"):
        fig1_spec([t, a1, a2], "out.svg")


def test_fig2_spec_panels_per_degree(tmp_path):
    s1 = make_csv(tmp_path / "wide.csv", SCAN_TEXT)
    s2 = make_csv(
        tmp_path / "narrow.csv",
        "xjump,n,alpha,alpha_rescaled,r\n0.0,2,0.1,0.3,0.0\n",
    )
    spec = fig2_spec([s1, s2], "out.svg")
    assert [p.title for p in spec.panels] == ["n = 2", "n = 50"]
    assert [s.label for s in spec.panels[0].series] == ["wide", "narrow"]
    assert [s.label for s in spec.panels[1].series] == ["wide"]
    assert spec.panels[0].series[0].where == ("n", "2")
    assert spec.panels[1].series[0].where == ("n", "50")


def test_fig2_spec_missing_column(tmp_path):
    bad = make_csv(tmp_path / "bad.csv", "xjump,n,alpha\n1.0,2,0.1\n")
    with pytest.raises(MissingColumnError) as err:
        fig2_spec([bad], "out.svg")
    assert err.value.column == "alpha_rescaled"


def test_fig2_spec_non_integer_degree(tmp_path):
    bad = make_csv(
        tmp_path / "bad.csv",
        "xjump,n,alpha,alpha_rescaled,r\n1.0,two,0.1,0.3,0.0\n",
    )
    with pytest.raises(ValueError, match="non-integer degree"):
        fig2_spec([bad], "out.svg")
