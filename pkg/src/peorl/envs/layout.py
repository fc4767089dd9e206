"""Line-oriented map files for the benchmark environments.

Records, one per line (``#`` starts a comment)::

    SIZE rows cols
    ORIGIN k            # index of the first row/column (default 1)
    DEPOT r c [label]
    WALL r c dir        # dir in e/s/w/n
    RED r c
    YELLOW r c
    START r c
    DOOR r c
    GOAL r c
    BONUS r c
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

OPPOSITE = {"e": "w", "w": "e", "s": "n", "n": "s"}
DELTA = {"e": (0, 1), "w": (0, -1), "s": (1, 0), "n": (-1, 0)}


class MapError(ValueError):
    pass


@dataclass
class Layout:
    rows: int = 0
    cols: int = 0
    origin: int = 1
    depots: dict = field(default_factory=dict)  # label -> (r, c)
    walls: set = field(default_factory=set)  # (r, c, dir), stored for both sides
    red: set = field(default_factory=set)
    yellow: set = field(default_factory=set)
    starts: list = field(default_factory=list)
    door: tuple | None = None
    goal: tuple | None = None
    bonus: tuple | None = None

    def inside(self, cell: tuple) -> bool:
        lo = self.origin
        return lo <= cell[0] < lo + self.rows and lo <= cell[1] < lo + self.cols

    def neighbour(self, cell: tuple, direction: str) -> tuple | None:
        """Adjacent cell in ``direction`` or None if a wall or the border is in the way."""
        if (*cell, direction) in self.walls:
            return None
        dr, dc = DELTA[direction]
        nxt = (cell[0] + dr, cell[1] + dc)
        return nxt if self.inside(nxt) else None


def parse_layout(text: str) -> Layout:
    layout = Layout()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        tag, args = line[0], line[1:]
        try:
            if tag == "SIZE":
                layout.rows, layout.cols = int(args[0]), int(args[1])
            elif tag == "ORIGIN":
                layout.origin = int(args[0])
            elif tag == "DEPOT":
                label = args[2] if len(args) > 2 else f"d{len(layout.depots) + 1}"
                layout.depots[label] = (int(args[0]), int(args[1]))
            elif tag == "WALL":
                r, c, d = int(args[0]), int(args[1]), args[2]
                dr, dc = DELTA[d]
                layout.walls.add((r, c, d))
                layout.walls.add((r + dr, c + dc, OPPOSITE[d]))
            elif tag in ("RED", "YELLOW", "START", "DOOR", "GOAL", "BONUS"):
                cell = (int(args[0]), int(args[1]))
                if tag == "RED":
                    layout.red.add(cell)
                elif tag == "YELLOW":
                    layout.yellow.add(cell)
                elif tag == "START":
                    layout.starts.append(cell)
                else:
                    setattr(layout, tag.lower(), cell)
            else:
                raise MapError(f"line {lineno}: unknown record {tag!r}")
        except (IndexError, ValueError, KeyError) as e:
            if isinstance(e, MapError):
                raise
            raise MapError(f"line {lineno}: malformed {tag} record: {raw.strip()!r}") from None
    if layout.rows <= 0 or layout.cols <= 0:
        raise MapError("missing SIZE record")
    return layout


def load_layout(name: str) -> Layout:
    """Load a shipped map (``taxi`` or ``gridworld``) or a map file path."""
    if name in ("taxi", "gridworld"):
        text = resources.files(__package__).joinpath("maps", f"{name}.map").read_text(encoding="utf-8")
    else:
        with open(name, encoding="utf-8") as fh:
            text = fh.read()
    return parse_layout(text)
