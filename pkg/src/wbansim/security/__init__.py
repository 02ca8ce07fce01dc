from .aes import AES128
from .suites import (
    AccessDenied, AuthFailure, KeyRecord, Malformed, ReplayRejected, RekeyRequired,
    SecuredFrame, SecurityError, SecuritySuite, SuiteProperties, load_vectors, protect,
    suite_properties, unprotect,
)

__all__ = [
    "AES128", "AccessDenied", "AuthFailure", "KeyRecord", "Malformed", "ReplayRejected",
    "RekeyRequired", "SecuredFrame", "SecurityError", "SecuritySuite", "SuiteProperties",
    "load_vectors", "protect", "suite_properties", "unprotect",
]
