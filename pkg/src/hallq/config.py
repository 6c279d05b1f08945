from dataclasses import dataclass, field

SUPPORTED_PRIMES = (2, 3, 5, 7)

#: default cap on objects produced per enumeration call
DEFAULT_ENUMERATION_CAP = 10**6
#: default cap on exhaustive scans of Hom/End spaces (number of elements p^dim)
DEFAULT_SCAN_CAP = 10**6
#: GL-orbit dedup is used when the product of |GL(d_i, p)| stays below this
GL_ORBIT_LIMIT = 500_000


@dataclass
class RunConfig:
    """Knobs shared by the CLI and the audit battery.

    Identical config + inputs must give byte-identical JSON output.
    """

    p: int = 2
    max_total_dim: int = 5
    nilpotent: bool = False
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    scan_cap: int = DEFAULT_SCAN_CAP
    threads: int = 1
    output: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported field characteristic {self.p}; "
                             f"supported primes: {SUPPORTED_PRIMES}")
        if self.enumeration_cap <= 0 or self.scan_cap <= 0:
            raise ValueError("caps must be positive")
