#!/usr/bin/env python3
"""Regenerate the packaged task dataset from its reference programs.

Each task's ground truth is the transition list the static interpreter
produces for the task's checked-in reference program (h_takeoff 2.5, grounded
start).  Run from the repo root after editing programs or descriptions:

    python3 tools/build_dataset.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from skysim.interpreter import execute, parse, transitions_of  # noqa: E402

H_TAKEOFF = 2.5

BUCKETS = {
    "basic": [6, 8],
    "intermediate": [9, 12],
    "advanced": [13, 16],
    "expert": [17, 19],
}

DESCRIPTIONS = {
    "t01": "Take off, climb 5 meters, turn to face east, fly 6 meters east, fly 6 meters back west, then land.",
    "t02": "Take off and fly a 4-meter square at takeoff altitude without turning: north, east, south, west. Land once the square is closed.",
    "t03": "Take off, climb 3 meters, fly 6 meters east, then fly one straight diagonal leg 6 meters north and 6 meters west, then 6 meters south back to the start. Land at the end.",
    "t04": "Take off, climb 4 meters, make two 90-degree clockwise turns, descend 4 meters back to takeoff altitude, make two more 90-degree clockwise turns to face north again, then land.",
    "t05": "Take off, climb 2.5 meters, then fly a zigzag: 3 meters north, 3 meters east, 3 meters north, 3 meters west, and finally 3 meters north. Land at the end.",
    "t06": "Take off and fly a 4-meter square at takeoff altitude, turning 90 degrees clockwise before each side; the sides run north, east, south, west. Land when the square is closed.",
    "t07": "Take off, then climb a staircase of four steps heading north: each step climbs 2 meters and then moves 3 meters north. Land at the end.",
    "t08": "Take off, climb 5 meters, then patrol a rectangle turning 90 degrees clockwise before each side: 6 meters north, 8 meters east, 6 meters south, 8 meters west. Land after the last side.",
    "t09": "Take off, climb 4 meters, then trace a plus sign from the center: 4 meters north and back, 4 meters east and back, 4 meters south and back, 4 meters west and back. Descend 2 meters, then land.",
    "t10": "Take off, climb 3 meters, then fly a diamond of four diagonal legs, each moving 3 meters on both horizontal axes, returning to the start. Turn to face south, descend 1 meter, then land.",
    "t11": "Take off, then fly an ascending square spiral: four times, turn 90 degrees clockwise, fly a 4-meter side (north, east, south, west in order), and climb 1 meter after the side. Land at the end.",
    "t12": "Take off, climb 5 meters, then mow the area: fly 6 meters east, turn to face east, advance 2 meters north, fly 6 meters west, turn to face south, advance 2 meters north, fly 6 meters east, turn to face west, advance 2 meters north, fly 6 meters west, then return 6 meters south. Land at the end.",
    "t13": "Take off, climb 2 meters, then fly a ring of eight legs, turning 90 degrees clockwise before each cardinal leg: 3 meters north then a diagonal 2 meters north and 2 meters east; 3 meters east then a diagonal 2 meters south and 2 meters east; 3 meters south then a diagonal 2 meters south and 2 meters west; 3 meters west then a diagonal 2 meters north and 2 meters west, closing the ring. Land at the end.",
    "t14": "Take off, climb 2.5 meters, fly a 4-meter square (north, east, south, west), turn to face east, climb 3 more meters, fly the square reversed (east, north, west, south), turn to face south, descend 3 meters, turn to face west, then land.",
    "t15": "Take off, then climb a staircase of five steps heading north: each step climbs 1 meter and then moves 2 meters north. Descend 5 meters back to takeoff altitude, then land.",
    "t16": "Take off, climb 4 meters, fly a 5-meter square turning 90 degrees clockwise before each side (north, east, south, west), then fly the same square again without turning, descend 4 meters, turn to face south, then land.",
    "t17": "Take off, then fly an ascending ridge north: four steps of 3 meters north then 2 meters up; come back with four steps of 3 meters south then 2 meters down, returning to the start at takeoff altitude. Land at the end.",
    "t18": "Take off, climb 5 meters, then fly two full laps of a 5-meter square, turning 90 degrees clockwise before every side; the sides run north, east, south, west on each lap. Land after the second lap.",
    "t19": "Take off, climb 3 meters, turn to face east, then fly the square border: 6 meters north, 6 meters east, turn to face south, 6 meters south, 6 meters west. Turn to face west, cut the diagonal 6 meters north and 6 meters east, fly 6 meters west, cut the other diagonal 6 meters south and 6 meters east, turn to face north, and fly 6 meters west back to the start. Bounce 2 meters up and back down, then land.",
    "t20": "Take off, climb 2 meters, then fly three expanding shelf steps: each step goes 4 meters north, 4 meters east, and climbs 1 meter. Turn 180 degrees, return 12 meters south and 12 meters west, turn 90 degrees counterclockwise, descend 3 meters, turn 90 degrees counterclockwise again, then land.",
}


def bucket_for(count: int) -> str:
    for name, (lo, hi) in BUCKETS.items():
        if lo <= count <= hi:
            return name
    raise SystemExit(f"action count {count} fits no bucket")


def main() -> None:
    dataset_dir = ROOT / "src" / "skysim" / "bench" / "data" / "advanced_desk"
    programs = dataset_dir / "programs"
    rows = []
    for task_id in sorted(DESCRIPTIONS):
        code = (programs / f"{task_id}.py").read_text(encoding="utf-8")
        trace = execute(parse(code), h_takeoff=H_TAKEOFF)
        if trace.faults:
            raise SystemExit(f"{task_id}: reference program faults: {trace.faults}")
        gt = [t.as_list() for t in transitions_of(trace)]
        rows.append(
            {
                "id": task_id,
                "description": DESCRIPTIONS[task_id],
                "ground_truth": gt,
                "complexity": bucket_for(len(gt)),
                "h_takeoff": H_TAKEOFF,
            }
        )
    (dataset_dir / "tasks.jsonl").write_text(
        "".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8"
    )
    manifest = {
        "name": "advanced_desk",
        "buckets": BUCKETS,
        "h_takeoff": H_TAKEOFF,
        "provenance": (
            "ground truths generated by the skysim static interpreter from the "
            "reference programs in programs/, grounded start, h_takeoff 2.5"
        ),
        "programs": {row["id"]: f"programs/{row['id']}.py" for row in rows},
    }
    (dataset_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    counts = {}
    for row in rows:
        counts.setdefault(row["complexity"], []).append(len(row["ground_truth"]))
    print(f"wrote {len(rows)} tasks")
    for name in BUCKETS:
        print(f"  {name}: {sorted(counts.get(name, []))}")


if __name__ == "__main__":
    main()
