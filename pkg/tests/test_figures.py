import numpy as np
import pytest

from dualsem.evaluation import ScoredInstance
from dualsem.figures import (
    ablation_chart,
    grid_heatmap,
    imp_score_distributions,
    rte_score_histogram,
    training_curves,
)
from dualsem.training import GridCell, GridResult, MetricRecord

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def sample_metrics() -> list[MetricRecord]:
    return [
        MetricRecord(step=4, train_loss=2.1, dev_rte_avg=0.55),
        MetricRecord(step=8, train_loss=1.4, dev_rte_avg=0.80),
    ]


def sample_scores() -> list[ScoredInstance]:
    rng = np.random.default_rng(7)
    scored = []
    for index in range(40):
        gold = "entailment" if index % 2 == 0 else "non-entailment"
        origin = "explicit_entailment" if index % 2 == 0 else "contradiction"
        scored.append(
            ScoredInstance(score=float(rng.uniform(-1.0, 1.0)), gold=gold, origin=origin)
        )
    return scored


def sample_grid() -> GridResult:
    cells = [
        GridCell(batch_size=16, learning_rate=1e-5, dev_rte_avg=0.61),
        GridCell(batch_size=16, learning_rate=3e-5, dev_rte_avg=0.72),
        GridCell(batch_size=32, learning_rate=1e-5, dev_rte_avg=None, error="diverged"),
        GridCell(batch_size=32, learning_rate=3e-5, dev_rte_avg=0.81),
    ]
    return GridResult(cells=cells, best=cells[3])


RENDER_CASES = [
    ("curves.png", lambda path: training_curves(sample_metrics(), [2.5, 2.0, 1.7, 1.2], path)),
    ("rte.png", lambda path: rte_score_histogram(sample_scores(), 0.25, path)),
    (
        "imp.png",
        lambda path: imp_score_distributions(
            {"premises": [0.1, 0.4, 0.9], "hypotheses": [0.05, 0.2]}, path
        ),
    ),
    ("grid.png", lambda path: grid_heatmap(sample_grid(), path)),
    (
        "ablation.png",
        lambda path: ablation_chart(
            {"full": (0.81, 0.99), "no_contradiction": (0.64, None)}, path
        ),
    ),
]


@pytest.mark.parametrize("name,render", RENDER_CASES, ids=[c[0] for c in RENDER_CASES])
def test_renders_nonempty_png(tmp_path, name, render):
    path = render(tmp_path / "figures" / name)
    assert path == tmp_path / "figures" / name
    payload = path.read_bytes()
    assert payload.startswith(PNG_MAGIC)
    assert len(payload) > 1_000


@pytest.mark.parametrize("name,render", RENDER_CASES, ids=[c[0] for c in RENDER_CASES])
def test_rerender_is_byte_identical(tmp_path, name, render):
    first = render(tmp_path / "a" / name).read_bytes()
    second = render(tmp_path / "b" / name).read_bytes()
    assert first == second


def test_empty_inputs_rejected(tmp_path):
    with pytest.raises(ValueError, match="at least one metric"):
        training_curves([], [1.0], tmp_path / "x.png")
    with pytest.raises(ValueError, match="at least one metric"):
        training_curves(sample_metrics(), [], tmp_path / "x.png")
    with pytest.raises(ValueError, match="scored instance"):
        rte_score_histogram([], 0.0, tmp_path / "x.png")
    with pytest.raises(ValueError, match="nonempty group"):
        imp_score_distributions({}, tmp_path / "x.png")
    with pytest.raises(ValueError, match="nonempty group"):
        imp_score_distributions({"empty": []}, tmp_path / "x.png")
    with pytest.raises(ValueError, match="at least one cell"):
        grid_heatmap(GridResult(cells=[], best=None), tmp_path / "x.png")
    with pytest.raises(ValueError, match="variant row"):
        ablation_chart({}, tmp_path / "x.png")


def test_creates_parent_directories(tmp_path):
    nested = tmp_path / "deeply" / "nested" / "dir" / "curves.png"
    training_curves(sample_metrics(), [2.0, 1.0], nested)
    assert nested.exists()
