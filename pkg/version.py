"""
Teledistill Version Management

Bump VERSION with each release.
Format: MAJOR.MINOR.PATCH
- MAJOR: Changes to report schemas or CLI flags
- MINOR: New commands, modules or checks
- PATCH: Numerical fixes, small improvements
"""

VERSION = "0.4.1"
VERSION_NAME = "Markov Bounds"

# Changelog for reference
CHANGELOG = {
    "0.4.1": {
        "date": "2026-10-19",
        "name": "Markov Bounds",
        "changes": [
            "Exponent grid oracle walks the simplex in blocks; resolution 0.002 fits the guard",
            "Tolerance failures raise ToleranceFailure after the report is written",
            "Guard refusals are logged as GUARD records",
            "exponent reports d^(-nE) as an extra field instead of the bound_corollary1 column",
            "distill --noise prints the mean fidelity of sampled single runs",
        ]
    },
    "0.4.0": {
        "date": "2026-10-12",
        "name": "Markov Bounds",
        "changes": [
            "Markov noise models: communicating classes, stationary laws per closed class",
            "bounds command reports the Markov bound and restricts reducible chains to one class",
            "Error exponent via the tilted family with bounded scalar refinement",
        ]
    },
    "0.3.0": {
        "date": "2026-09-28",
        "name": "Distillation",
        "changes": [
            "distill command: full protocol simulation against code entanglement fidelity",
            "Pure-state branch accumulation for runs beyond the dense guard",
            "Scenario batteries run on a thread pool, collected in submission order",
        ]
    },
    "0.2.0": {
        "date": "2026-09-10",
        "name": "Symplectic Codes",
        "changes": [
            "Code projectors from self-orthogonal subspaces, syndrome decoding",
            "Maximum-likelihood coset representatives and the correctable set J",
            "code-fidelity command with Knill-Laflamme check",
        ]
    },
    "0.1.0": {
        "date": "2026-08-25",
        "name": "Teleportation Channel",
        "changes": [
            "Weyl operators and both Bell bases",
            "verify-lemma1, twirl and choi-roundtrip commands",
            "CSV/JSON reports with a stable column schema",
        ]
    },
}


def get_version() -> str:
    """Get current version string"""
    return VERSION


def get_version_display() -> str:
    """Get formatted version for display"""
    return f"v{VERSION} - {VERSION_NAME}"
