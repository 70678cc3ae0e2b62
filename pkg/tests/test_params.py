"""Parameter containers, block arithmetic and eager validation."""

import numpy as np
import pytest

from expfam_div import (
    InvalidParameter,
    NaturalDomainViolation,
    NotSPD,
    OutOfSupport,
    ParamKind,
    make_family,
)
from expfam_div.params import block_dot, block_flatten, block_mix


class TestBlocks:
    def test_block_dot_mixes_scalar_vector_matrix(self):
        a = (2.0, np.array([1.0, 2.0]), np.array([[1.0, 0.5], [0.5, 2.0]]))
        b = (3.0, np.array([4.0, -1.0]), np.array([[2.0, 1.0], [1.0, 0.0]]))
        # 6 + (4 - 2) + (2 + 0.5 + 0.5 + 0) = 11
        assert block_dot(a, b) == pytest.approx(11.0)

    def test_block_mix_is_affine(self):
        a = (1.0, np.array([2.0, 0.0]))
        b = (3.0, np.array([0.0, 4.0]))
        mixed = block_mix(0.25, a, 0.75, b)
        assert mixed[0] == pytest.approx(2.5)
        np.testing.assert_allclose(mixed[1], [0.5, 3.0])

    def test_block_flatten_concatenates(self):
        flat = block_flatten((1.0, np.array([2.0, 3.0]), np.eye(2)))
        np.testing.assert_allclose(flat, [1.0, 2.0, 3.0, 1.0, 0.0, 0.0, 1.0])


class TestValidation:
    def test_source_constructor_rejects_bad_domain(self):
        fam = make_family("exponential")
        with pytest.raises(InvalidParameter):
            fam.source(-1.0)
        with pytest.raises(InvalidParameter):
            fam.source(0.0)

    def test_natural_constructor_rejects_domain_violation(self):
        fam = make_family("gaussian1d")
        with pytest.raises(NaturalDomainViolation):
            fam.natural(0.5, 0.25)  # second coordinate must be negative

    def test_block_count_must_match_layout(self):
        fam = make_family("gamma")
        with pytest.raises(InvalidParameter):
            fam.source(1.0)

    def test_matrix_block_must_be_symmetric(self):
        fam = make_family("mvn", dim=2)
        with pytest.raises(InvalidParameter):
            fam.source(np.zeros(2), np.array([[1.0, 0.5], [0.1, 1.0]]))

    def test_covariance_must_be_spd(self):
        fam = make_family("mvn", dim=2)
        with pytest.raises(NotSPD):
            fam.source(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_param_kind_tagging(self):
        fam = make_family("poisson")
        lam = fam.source(2.0)
        theta = fam.to_natural(lam)
        assert lam.kind is ParamKind.SOURCE
        assert theta.kind is ParamKind.NATURAL
        assert fam.moment(lam).kind is ParamKind.MOMENT

    def test_kind_mismatch_rejected(self):
        fam = make_family("poisson")
        theta = fam.to_natural(fam.source(2.0))
        with pytest.raises(InvalidParameter):
            fam.to_natural(theta)

    def test_family_mismatch_rejected(self):
        poisson = make_family("poisson")
        exponential = make_family("exponential")
        with pytest.raises(InvalidParameter):
            exponential.log_density(poisson.source(2.0), 1.0)

    def test_out_of_support(self):
        fam = make_family("beta")
        lam = fam.source(2.0, 3.0)
        with pytest.raises(OutOfSupport):
            fam.log_density(lam, 1.5)
        with pytest.raises(OutOfSupport):
            fam.sufficient_stat(0.0)

    def test_blocks_are_read_only(self):
        fam = make_family("mvn", dim=2)
        lam = fam.source(np.zeros(2), np.eye(2))
        with pytest.raises(ValueError):
            lam.blocks[1][0, 0] = 5.0
