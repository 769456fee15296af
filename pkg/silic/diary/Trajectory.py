import datetime
import json
from dataclasses import dataclass
from typing import Tuple

from ..errors import InvalidConfigError
from ..mdp.names import Action
from ..mdp.StateSpace import State


@dataclass(frozen=True)
class Trajectory(object):
    r"""One person-day: ``states[t]`` is occupied at hour t, ``actions[t]`` is taken there."""

    person_id: str
    day: datetime.date
    states: Tuple[State, ...]
    actions: Tuple[int, ...]

    def __len__(self):
        return len(self.states)

    def indices(self, space):
        return [space.index(state) for state in self.states]

    def validate(self, space):
        if len(self.states) != space.n_hours or len(self.actions) != space.n_hours:
            raise InvalidConfigError(
                "trajectory {}/{} has {} steps, expected {}".format(
                    self.person_id, self.day, len(self.states), space.n_hours
                )
            )
        for t, state in enumerate(self.states):
            space.validate(state)
            if state.hour != t:
                raise InvalidConfigError("state at step {} has hour {}".format(t, state.hour))
        for t in range(1, space.n_hours):
            prev, cur = self.states[t - 1], self.states[t]
            if self.actions[t - 1] == Action.Stay:
                consistent = prev[1:] == cur[1:]
            else:
                consistent = not cur.is_first and cur.count == min(prev.count + 1, space.n_max)
            if not consistent:
                raise InvalidConfigError(
                    "step {} -> {} of {}/{} breaks the transition rule".format(
                        t - 1, t, self.person_id, self.day
                    )
                )
        return self

    def to_dict(self):
        return {
            "person_id": self.person_id,
            "day": self.day.isoformat(),
            "states": [[s.hour, s.activity, int(s.is_first), s.count] for s in self.states],
            "actions": [int(a) for a in self.actions],
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            person_id=str(doc["person_id"]),
            day=datetime.date.fromisoformat(doc["day"]),
            states=tuple(State(int(h), int(a), bool(f), int(n)) for h, a, f, n in doc["states"]),
            actions=tuple(int(a) for a in doc["actions"]),
        )


def write_trajectories(trajectories, stream):
    for trajectory in trajectories:
        stream.write(json.dumps(trajectory.to_dict()) + "\n")


def read_trajectories(stream):
    return [Trajectory.from_dict(json.loads(line)) for line in stream if line.strip()]
