from dataclasses import asdict, dataclass, fields
from typing import Optional

from ..errors import InvalidConfigError
from ..mdp.names import N_HOURS

VISITATION, LIKELIHOOD = "visitation", "likelihood"
GRADIENTS = (VISITATION, LIKELIHOOD)


@dataclass(frozen=True)
class TrainingConfig(object):
    r"""Hyperparameters of the guided maximum-entropy IRL loop.

    ``gamma`` lies in [0, 1); 1 is also accepted because every episode ends
    after ``horizon`` hours, so undiscounted values stay finite.
    ``guided_init`` / ``guided_updates`` switch the provider off for either
    phase; with both off the loop is plain gradient ascent from zeros.

    ``gradient`` picks the ascent direction: ``visitation`` is the expert
    minus learner feature expectation, ``likelihood`` the exact gradient of
    the expert action log-likelihood. ``l2`` adds a zero-centred penalty
    (l2 / 2) ||theta||^2 to the training KL. A step that raises that objective
    is halved up to ``max_backtracks`` times; 0 applies every update as is.
    """

    gamma: float = 0.95
    eps_value: float = 1e-4
    eps_converge: float = 1e-4
    alpha: float = 2.0
    lambda_llm: float = 0.002
    top_k: int = 30
    horizon: int = N_HOURS
    max_iters: int = 200
    max_sweeps: Optional[int] = None
    guided_init: bool = True
    guided_updates: bool = True
    gradient: str = VISITATION
    l2: float = 0.0
    max_backtracks: int = 10

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidConfigError(
                "gamma must lie in [0, 1), or equal 1 on the finite hour-indexed horizon; "
                "got {}".format(self.gamma)
            )
        for name in ("eps_value", "eps_converge"):
            if not getattr(self, name) > 0:
                raise InvalidConfigError("{} must be > 0".format(name))
        if self.alpha < 0 or self.lambda_llm < 0:
            raise InvalidConfigError("alpha and lambda_llm must be >= 0")
        if self.top_k < 1:
            raise InvalidConfigError("top_k must be >= 1, got {}".format(self.top_k))
        if self.horizon < 1:
            raise InvalidConfigError("horizon must be >= 1, got {}".format(self.horizon))
        if self.max_iters < 0:
            raise InvalidConfigError("max_iters must be >= 0, got {}".format(self.max_iters))
        if self.max_sweeps is not None and self.max_sweeps < 1:
            raise InvalidConfigError("max_sweeps must be >= 1")
        if self.gradient not in GRADIENTS:
            raise InvalidConfigError(
                "gradient must be one of {}, got {!r}".format(GRADIENTS, self.gradient)
            )
        if self.l2 < 0:
            raise InvalidConfigError("l2 must be >= 0, got {}".format(self.l2))
        if self.max_backtracks < 0:
            raise InvalidConfigError(
                "max_backtracks must be >= 0, got {}".format(self.max_backtracks)
            )

    @property
    def sweep_budget(self):
        if self.max_sweeps is not None:
            return self.max_sweeps
        return 10 * max(self.max_iters, self.horizon)

    def check_space(self, space):
        if self.horizon != space.n_hours:
            raise InvalidConfigError(
                "horizon {} does not match the {}-hour state space".format(
                    self.horizon, space.n_hours
                )
            )

    @classmethod
    def from_dict(cls, doc):
        known = {field.name for field in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidConfigError("unknown training keys: {}".format(sorted(unknown)))
        return cls(**doc)

    def to_dict(self):
        return asdict(self)
