import pytest

from tensorideals.algebra import annihilated_by_cups_caps
from tensorideals.generator import find_generator, truncation_dim
from tensorideals.oracle import RepSpec, phi


@pytest.mark.parametrize("spec,rc,kernel", [(RepSpec.O(0, 1), 2, 1), (RepSpec.O(3), 4, 14), (RepSpec.O(1, 1), 4, 14)],
                         ids=lambda x: x.label() if isinstance(x, RepSpec) else str(x))
def test_generator_at_critical_rank(spec, rc, kernel):
    g = find_generator(spec, rc)
    assert g.kernel_dim == kernel
    assert g.F is not None and annihilated_by_cups_caps(g.F)
    assert g.quasi_idempotent and g.alpha != 0
    assert g.generated_dim == kernel


def test_sp2_generator_fills_next_kernel():
    g = find_generator(RepSpec.O(0, 1), 2)
    assert truncation_dim(g.F, 3) == phi(RepSpec.O(0, 1), 3).kernel_dim == 10


def test_no_generator_below_threshold():
    g = find_generator(RepSpec.O(3), 3)
    assert g.F is None and g.kernel_dim == 0 and not g.quasi_idempotent
