from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ProtocolConfig:
    """Knobs shared by all protocol runs.

    total_fail    union-bound budget split evenly across ladder steps
    matrix_fail   probability budget for a sketch matrix missing the separation guarantee
    jl_constant   constant in the JL target dimension ``c ln(k+1) / eps^2``
    jl_eps        JL distortion; ``None`` means ``eps / 5``
    jl_retries    reseeds allowed before JL verification gives up
    cache_bytes   budget for generated sketch-matrix columns per protocol setup
    l1_extra_bits bits allowed above ``ceil(log2 d)`` for unary encodings
    """

    total_fail: float = 0.05
    matrix_fail: float = 1e-3
    jl_constant: float = 24.0
    jl_eps: float = None
    jl_retries: int = 10
    cache_bytes: int = 1 << 30
    l1_extra_bits: int = 4

    def __post_init__(self):
        if not 0 < self.total_fail < 1:
            raise ValueError("total_fail must lie in (0, 1)")
        if not 0 < self.matrix_fail < 1:
            raise ValueError("matrix_fail must lie in (0, 1)")
        if self.jl_constant <= 0:
            raise ValueError("jl_constant must be positive")
        if self.jl_eps is not None and not 0 < self.jl_eps < 0.5:
            raise ValueError("jl_eps must lie in (0, 1/2)")
        if self.jl_retries < 1:
            raise ValueError("jl_retries must be >= 1")

    def to_dict(self):
        return asdict(self)


DEFAULT_CONFIG = ProtocolConfig()
