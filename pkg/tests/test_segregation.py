import numpy as np
import pytest

from pslab import GridSpec, InsufficientDataError, MisuseError, ScalarField, \
    SolutionPair, SolveOptions, boundary_from_harmonic
from pslab.segregation import holder_quotient, interface_width, metrics, sweep


@pytest.fixture(scope="module")
def seg_table():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    bdry = boundary_from_harmonic(1, 10.0, g)
    return sweep(bdry, (1.0, 4.0, 16.0, 64.0), SolveOptions(tol=1e-9),
                 alpha=0.9)


def _segregated_pair(n=65):
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (n, n))
    xn = g.meshes()[-1]
    return SolutionPair(ScalarField(g, np.maximum(xn, 0.0)),
                        ScalarField(g, np.maximum(-xn, 0.0)))


def test_metrics_on_fully_segregated_pair():
    sup_uv, interaction, harm, hq = metrics(_segregated_pair(), alpha=0.9)
    assert sup_uv == 0.0
    assert interaction == 0.0
    assert harm <= 1e-12  # u - v = xN is discretely harmonic
    assert hq > 0


def test_holder_quotient_scaling():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (65, 65))
    x, _ = g.meshes()
    f = ScalarField(g, x)
    q1 = holder_quotient(f, 0.9, 4 * g.h)
    q2 = holder_quotient(ScalarField(g, 2 * x), 0.9, 4 * g.h)
    assert q2 == pytest.approx(2 * q1, rel=1e-12)
    # Lipschitz f: the quotient |dx|^{1-alpha} peaks at max separation
    assert q1 > 1.0


def test_holder_quotient_needs_admissible_pairs():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (33, 33))
    f = ScalarField(g, g.meshes()[0])
    with pytest.raises(InsufficientDataError):
        holder_quotient(f, 0.9, 10.0)  # min_sep exceeds the subbox


def test_sweep_guards():
    g = GridSpec((-1.0, -1.0), (1.0, 1.0), (17, 17))
    bdry = boundary_from_harmonic(1, 1.0, g)
    with pytest.raises(MisuseError):
        sweep(bdry, (1.0, 4.0))
    with pytest.raises(MisuseError):
        sweep(bdry, (4.0, 2.0, 1.0))
    with pytest.raises(MisuseError):
        sweep(bdry, (1.0, 4.0, 16.0), alpha=1.5)


def test_sweep_table_shape_and_trends(seg_table):
    t = seg_table
    assert t.complete
    assert len(t.betas) == 4
    assert np.all(t.sup_uv > 0)
    assert np.all(np.diff(t.sup_uv) < 0)
    assert np.all(np.diff(t.interaction) < 0)
    assert np.all(t.holder > 0)
    assert t.sweeps.dtype.kind == "i"
    assert len(t.pairs) == 4


def test_interface_width_shrinks(seg_table):
    widths = [interface_width(p, 0.05) for p in seg_table.pairs]
    assert widths[0] > widths[-1] >= 0
