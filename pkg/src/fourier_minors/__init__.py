"""Exact verification of nonvanishing minors of discrete Fourier matrices."""
from .cyclotomic import CycElt, cyclotomic_poly, galois_apply, norm, reduce
from .finite_field import FiniteFieldCtx, FFElt, build_field
from .minors import MinorSpec, classify, fourier_minor, minor_norm
from .campaign import CampaignConfig, certify, chebotarev_property, char_p_verify, verify_family

__version__ = "0.1.0"

__all__ = [
    "CycElt",
    "cyclotomic_poly",
    "galois_apply",
    "norm",
    "reduce",
    "FiniteFieldCtx",
    "FFElt",
    "build_field",
    "MinorSpec",
    "classify",
    "fourier_minor",
    "minor_norm",
    "CampaignConfig",
    "certify",
    "chebotarev_property",
    "char_p_verify",
    "verify_family",
]
