#!/usr/bin/env python3
"""Regenerate the packaged benchmark suites and mock-provider fixtures.

Deterministic: running it twice produces identical files. The mock
responses are synthesized with the package's own executors so the "correct"
outputs are correct by construction; the wrong ones encode realistic
failure modes (wrong sign, absolute-instead-of-delta, reordered queues,
truncated JSON).
"""
from __future__ import annotations

import json
import math
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cgascene.baselines import rodrigues_matrix  # noqa: E402
from cgascene.scene import default_scene  # noqa: E402

OUT_SUITES = Path(__file__).resolve().parents[1] / "src/cgascene/data/suites"
OUT_FIXTURES = Path(__file__).resolve().parents[1] / "src/cgascene/data/fixtures"

METHODS = ["simple_cga", "shenlong_cga", "euclidean_mat4", "compact_se3"]
CGA_METHODS = {"simple_cga", "simple_cga_verbose", "shenlong_cga"}

# Rough per-method token profiles (mirrors the reported cost ordering).
TOKEN_PROFILE = {
    "simple_cga": (180, 37),
    "simple_cga_verbose": (195, 34),
    "shenlong_cga": (240, 52),
    "euclidean_mat4": (150, 64),
    "compact_se3": (165, 23),
}


def fmt(x: float) -> str:
    return repr(round(float(x), 10))


def cga_translation(delta) -> str:
    dx, dy, dz = delta
    return f"T({fmt(dx)}*e1 + {fmt(dy)}*e2 + {fmt(dz)}*e3)"


def se3_translation(name, delta) -> str:
    return json.dumps({name: [{"type": "T", "v": [round(d, 10) for d in delta]}]})


def mat4_translation(name, delta) -> str:
    dx, dy, dz = (round(d, 10) for d in delta)
    m = [[1, 0, 0, dx], [0, 1, 0, dy], [0, 0, 1, dz], [0, 0, 0, 1]]
    return json.dumps({name: m})


def mat4_rotation_z(name, angle) -> str:
    c, s = math.cos(angle), math.sin(angle)
    m = [[c, -s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    return json.dumps({name: [[round(v, 12) for v in row] for row in m]})


def mat4_scale(name, s) -> str:
    m = [[s, 0, 0, 0], [0, s, 0, 0], [0, 0, s, 0], [0, 0, 0, 1]]
    return json.dumps({name: m})


def correct_output(method: str, task: dict) -> str:
    """Render the intended edit in the method's wire format."""
    name = task["object"]
    intent = task["intent"]
    if intent == "translate":
        delta = task["delta"]
        if method in CGA_METHODS:
            return json.dumps({name: cga_translation(delta)})
        if method == "compact_se3":
            return se3_translation(name, delta)
        return mat4_translation(name, delta)
    if intent == "scale":
        s = task["factor"]
        if method in CGA_METHODS:
            return json.dumps({name: f"D({s:g})"})
        if method == "compact_se3":
            return json.dumps({name: [{"type": "D", "factor": s}]})
        return mat4_scale(name, s)
    if intent == "rotate_z":
        angle = task["angle"]
        if method in CGA_METHODS:
            return json.dumps({name: f"R({fmt(angle)}, e1, e2)"})
        if method == "compact_se3":
            return json.dumps(
                {name: [{"type": "R", "axis": [0, 0, 1], "angle_rad": round(angle, 12)}]}
            )
        return mat4_rotation_z(name, angle)
    raise ValueError(intent)


def wrong_output(method: str, task: dict, rng: random.Random) -> str:
    """Parse-valid but geometrically wrong, by a margin no placement-family
    tolerance (0.5 units) forgives: every axis of a translation is shifted
    by more than one unit, scales are off by 2x, rotations use half the
    angle (tasks rotate off-axis objects only)."""
    if task["intent"] == "scale":
        bad = task["factor"] * rng.choice([2.0, 0.5])
        return correct_output(method, {**task, "factor": bad})
    if task["intent"] == "rotate_z":
        return correct_output(method, {**task, "angle": task["angle"] / 2.0})
    offset = rng.choice([(1.7, 1.3, -1.1), (-1.9, 1.1, 1.5)])
    bad = [d + o for d, o in zip(task["delta"], offset)]
    return correct_output(method, {**task, "delta": bad})


def malformed_output(method: str) -> str:
    if method in CGA_METHODS:
        return '{"RedSphere": "T(2*e'  # truncated mid-expression
    if method == "compact_se3":
        return '{"RedSphere": [{"type": "Q"}]}'
    return '{"RedSphere": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}'


def entry(method, instruction, text, rng, attempt=None):
    prompt_base, completion_base = TOKEN_PROFILE[method]
    e = {
        "strategy": method,
        "instruction": instruction,
        "text": text,
        "prompt_tokens": prompt_base + rng.randint(-10, 10),
        "completion_tokens": max(4, completion_base + rng.randint(-6, 6)),
        "latency_s": round(rng.uniform(0.6, 2.2), 3),
    }
    if attempt is not None:
        e["attempt"] = attempt
    return e


# --------------------------------------------------------------------------- hard pack

def hard_pack_tasks() -> list[dict]:
    """20 harder-grounding edits over the default scene (paraphrase,
    distractor, noisy phrasing, compositional)."""
    scene = default_scene()

    def center(name):
        return scene.get(name).center

    tasks = []

    def add(instruction, object_name, intent, *, delta=None, factor=None, angle=None,
            rules=None, expected=None):
        tasks.append({
            "id": f"hp{len(tasks) + 1:02d}",
            "instruction": instruction,
            "object": object_name,
            "intent": intent,
            "delta": delta,
            "factor": factor,
            "angle": angle,
            "start": center(object_name),
            "semantic_rules": rules or [],
            "expected_positions": expected or {},
        })

    add("Slide the red ball so it rests against the left face of the blue cube.",
        "RedSphere", "translate", delta=[2.0, 0.0, 0.0],
        rules=[{"rule": "surface_contact", "mover": "RedSphere", "target": "BlueCube", "axis": 0}],
        expected={"RedSphere": [2.0, 0.0, 0.0]})
    add("Set the green sphere down on the upper face of the blue cube.",
        "GreenSphere", "translate", delta=[7.0, 1.7, -2.0],
        rules=[{"rule": "surface_contact", "mover": "GreenSphere", "target": "BlueCube", "axis": 1}],
        expected={"GreenSphere": [4.0, 1.7, 0.0]})
    add("Park the purple sphere exactly halfway from the red sphere to the blue cube.",
        "PurpleSphere", "translate", delta=[2.0, 0.0, 4.0],
        rules=[{"rule": "midpoint", "mover": "PurpleSphere", "a": "RedSphere", "b": "BlueCube"}],
        expected={"PurpleSphere": [2.0, 0.0, 0.0]})
    add("Make the blue cube three times larger without moving it.",
        "BlueCube", "scale", factor=3.0,
        rules=[{"rule": "scale_factor", "mover": "BlueCube", "s": 3.0}])
    add("Raise the yellow cube by two units, leave everything else alone.",
        "YellowCube", "translate", delta=[0.0, 2.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "YellowCube", "delta": [0.0, 2.0, 0.0]}],
        expected={"YellowCube": [4.0, 2.0, -3.0]})
    add("Hmm, let's see... could you push the red sphere 3 to the right and 1 up?",
        "RedSphere", "translate", delta=[3.0, 1.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "RedSphere", "delta": [3.0, 1.0, 0.0]}],
        expected={"RedSphere": [3.0, 1.0, 0.0]})
    add("Spin the green sphere a quarter turn counterclockwise about the vertical-Z plane pair (XY).",
        "GreenSphere", "rotate_z", angle=math.pi / 2,
        expected={"GreenSphere": [0.0, -3.0, 2.0]},
        rules=[{"rule": "absolute_placement", "mover": "GreenSphere", "position": [0.0, -3.0, 2.0]}])
    add("Shrink the purple sphere to half its current size.",
        "PurpleSphere", "scale", factor=0.5,
        rules=[{"rule": "scale_factor", "mover": "PurpleSphere", "s": 0.5}])
    add("Ignore the yellow cube; move the red sphere to sit at coordinates (1, 2, 3).",
        "RedSphere", "translate", delta=[1.0, 2.0, 3.0],
        rules=[{"rule": "absolute_placement", "mover": "RedSphere", "position": [1.0, 2.0, 3.0]}],
        expected={"RedSphere": [1.0, 2.0, 3.0]})
    add("The blue cube looks lonely: bring the purple sphere flush against its left side.",
        "PurpleSphere", "translate", delta=[2.2, 0.0, 4.0],
        rules=[{"rule": "surface_contact", "mover": "PurpleSphere", "target": "BlueCube", "axis": 0}],
        expected={"PurpleSphere": [2.2, 0.0, 0.0]})
    add("Lower the green sphere onto the red sphere's top.",
        "GreenSphere", "translate", delta=[3.0, 1.7, -2.0],
        rules=[{"rule": "surface_contact", "mover": "GreenSphere", "target": "RedSphere", "axis": 1}],
        expected={"GreenSphere": [0.0, 1.7, 0.0]})
    add("Drag the yellow cube 4 units toward the viewer (positive Z).",
        "YellowCube", "translate", delta=[0.0, 0.0, 4.0],
        rules=[{"rule": "target_displacement", "mover": "YellowCube", "delta": [0.0, 0.0, 4.0]}],
        expected={"YellowCube": [4.0, 0.0, 1.0]})
    add("Double the red sphere, size-wise.",
        "RedSphere", "scale", factor=2.0,
        rules=[{"rule": "scale_factor", "mover": "RedSphere", "s": 2.0}])
    add("Quarter-turn the blue cube clockwise in the XY plane (about the origin).",
        "BlueCube", "rotate_z", angle=-math.pi / 2,
        expected={"BlueCube": [0.0, -4.0, 0.0]},
        rules=[{"rule": "absolute_placement", "mover": "BlueCube", "position": [0.0, -4.0, 0.0]}])
    add("Move the purple sphere up 1 and right 1 — tiny adjustment, thanks.",
        "PurpleSphere", "translate", delta=[1.0, 1.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "PurpleSphere", "delta": [1.0, 1.0, 0.0]}],
        expected={"PurpleSphere": [1.0, 1.0, -4.0]})
    add("Take the crimson orb (the red sphere) and push it until it touches the green sphere on X.",
        "RedSphere", "translate", delta=[-1.3, 0.0, 2.0],
        rules=[{"rule": "surface_contact", "mover": "RedSphere", "target": "GreenSphere", "axis": 0}],
        expected={"RedSphere": [-1.3, 0.0, 2.0]})
    add("Grow the yellow cube by 50 percent.",
        "YellowCube", "scale", factor=1.5,
        rules=[{"rule": "scale_factor", "mover": "YellowCube", "s": 1.5}])
    add("Shift the green sphere by (-1, 0, -2): watch the signs.",
        "GreenSphere", "translate", delta=[-1.0, 0.0, -2.0],
        rules=[{"rule": "target_displacement", "mover": "GreenSphere", "delta": [-1.0, 0.0, -2.0]}],
        expected={"GreenSphere": [-4.0, 0.0, 0.0]})
    add("Rotate the green sphere 180 degrees around Z (XY plane, about the origin).",
        "GreenSphere", "rotate_z", angle=math.pi,
        expected={"GreenSphere": [3.0, 0.0, 2.0]},
        rules=[{"rule": "absolute_placement", "mover": "GreenSphere", "position": [3.0, 0.0, 2.0]}])
    add("Put the red sphere exactly where the midpoint of the yellow cube and blue cube is.",
        "RedSphere", "translate", delta=[4.0, 0.0, -1.5],
        rules=[{"rule": "midpoint", "mover": "RedSphere", "a": "YellowCube", "b": "BlueCube"}],
        expected={"RedSphere": [4.0, 0.0, -1.5]})
    assert len(tasks) == 20
    return tasks


def build_hard_pack():
    tasks = hard_pack_tasks()
    suite = {
        "name": "hard_pack",
        "scene": "default",
        "methods": METHODS,
        "policy_k": 3,
        "trials_per_task": 1,
        "tasks": [
            {
                "id": t["id"],
                "instruction": t["instruction"],
                "semantic_rules": t["semantic_rules"],
                "expected_positions": t["expected_positions"],
            }
            for t in tasks
        ],
    }
    # Semantic success targets per method (mirrors the hard-pack shape):
    # simple 9/20, shenlong 9/20 (+1 parse failure), euclidean 5/20, se3 9/20.
    # The Euclidean set avoids scale intents: the 4x4 interface has no
    # object-centric size channel, so scale tasks cannot pass its semantics.
    correct_ids = {
        "simple_cga": {1, 2, 3, 4, 5, 6, 8, 13, 17},
        "shenlong_cga": {1, 2, 3, 4, 5, 9, 12, 13, 15},
        "euclidean_mat4": {1, 2, 5, 6, 9},
        "compact_se3": {1, 2, 3, 5, 6, 8, 12, 13, 17},
    }
    shenlong_malformed = {20}
    rng = random.Random(20240416)
    responses = []
    for t in tasks:
        idx = int(t["id"][2:])
        for method in METHODS:
            if method == "shenlong_cga" and idx in shenlong_malformed:
                text = malformed_output(method)
            elif idx in correct_ids[method]:
                text = correct_output(method, t)
            else:
                text = wrong_output(method, t, rng)
            responses.append(entry(method, t["instruction"], text, rng))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


# ------------------------------------------------------------------- sequence stress

def sequence_templates() -> list[dict]:
    """20 ordered-chain templates (3-5 ops each) over default-scene objects."""
    rng = random.Random(52)
    objects = ["RedSphere", "BlueCube", "GreenSphere", "YellowCube", "PurpleSphere"]
    templates = []
    for i in range(20):
        name = objects[i % len(objects)]
        length = 3 + (i % 3)
        ops = []
        phrases = []
        for j in range(length):
            kind = rng.choice(["translate", "rotate", "dilate"])
            if kind == "translate":
                delta = [rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([-1, 0, 1, 2]),
                         rng.choice([-2, 0, 2])]
                ops.append({"kind": "translate", "params": [float(x) for x in delta]})
                phrases.append(f"translate it by ({delta[0]}, {delta[1]}, {delta[2]})")
            elif kind == "rotate":
                quarter = rng.choice([1, 2, 3])
                angle = quarter * math.pi / 2
                ops.append({"kind": "rotate", "params": [0.0, 0.0, 1.0, angle]})
                phrases.append(f"rotate it {quarter * 90} degrees in the XY plane")
            else:
                factor = rng.choice([0.5, 1.5, 2.0, 3.0])
                ops.append({"kind": "dilate", "params": [factor]})
                phrases.append(f"scale it by {factor:g}")
        steps = "; then ".join(phrases)
        templates.append({
            "id": f"seq{i + 1:02d}",
            "instruction": f"Edit {name}: first {steps}. Keep the operations in this exact order.",
            "object": name,
            "ops": ops,
        })
    return templates


def render_chain(method: str, name: str, ops: list[dict], order: list[int]) -> str:
    """Render an op chain in a method's wire format, possibly reordered."""
    seq = [ops[i] for i in order]
    if method == "compact_se3":
        out = []
        for op in seq:
            if op["kind"] == "translate":
                out.append({"type": "T", "v": op["params"]})
            elif op["kind"] == "rotate":
                out.append({"type": "R", "axis": op["params"][:3], "angle_rad": op["params"][3]})
            else:
                out.append({"type": "D", "factor": op["params"][0]})
        return json.dumps({name: out})
    # CGA: rightmost factor applies first, so written order is reversed.
    factors = []
    for op in reversed(seq):
        if op["kind"] == "translate":
            factors.append(cga_translation(op["params"]))
        elif op["kind"] == "rotate":
            factors.append(f"R({fmt(op['params'][3])}, e1, e2)")
        else:
            factors.append(f"D({op['params'][0]:g})")
    return json.dumps({name: "*".join(factors)})


def build_sequence_stress():
    templates = sequence_templates()
    suite = {
        "name": "sequence_stress",
        "scene": "default",
        "methods": ["simple_cga", "compact_se3"],
        "policy_k": 3,
        "trials_per_task": 6,
        "tasks": [
            {
                "id": t["id"],
                "instruction": t["instruction"],
                "expected_chain": t["ops"],
                "chain_object": t["object"],
            }
            for t in templates
        ],
    }
    rng = random.Random(99)
    responses = []
    # Fidelity failures: simple drops 1 template (reordered), se3 drops 2.
    reorder_for = {"simple_cga": {7}, "compact_se3": {7, 15}}
    for i, t in enumerate(templates, start=1):
        n = len(t["ops"])
        for method in ["simple_cga", "compact_se3"]:
            order = list(range(n))
            if i in reorder_for[method]:
                order[0], order[1] = order[1], order[0]
            text = render_chain(method, t["object"], t["ops"], order)
            responses.append(entry(method, t["instruction"], text, rng))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


# -------------------------------------------------------------------- powered hard

def build_powered_hard():
    base = hard_pack_tasks()
    variants = [
        lambda s: s,
        lambda s: s + " Please.",
        lambda s: "Quick edit: " + s[0].lower() + s[1:],
        lambda s: s + " Do not touch any other object.",
        lambda s: "In the current scene, " + s[0].lower() + s[1:],
    ]
    tasks = []
    for v_idx, variant in enumerate(variants, start=1):
        for t in base:
            tasks.append({
                **t,
                "id": f"{t['id']}v{v_idx}",
                "instruction": variant(t["instruction"]),
            })
    assert len(tasks) == 100
    suite = {
        "name": "powered_hard",
        "scene": "default",
        "methods": METHODS,
        "policy_k": 1,
        "trials_per_task": 1,
        "tasks": [
            {
                "id": t["id"],
                "instruction": t["instruction"],
                "semantic_rules": t["semantic_rules"],
                "expected_positions": t["expected_positions"],
            }
            for t in tasks
        ],
    }
    # Semantic targets: simple 45, shenlong 44 (plus 5 parse failures),
    # euclidean 24, se3 42 -- the powered-suite shape. Euclidean correct
    # rows must avoid scale intents (no size channel in the 4x4 format).
    targets = {"simple_cga": 45, "shenlong_cga": 44, "euclidean_mat4": 24, "compact_se3": 42}
    parse_fail = {"shenlong_cga": 5}
    rng = random.Random(777)
    responses = []
    for method in METHODS:
        order = list(range(100))
        random.Random(sum(map(ord, method))).shuffle(order)
        eligible = [
            pos for pos in order
            if not (method == "euclidean_mat4" and tasks[pos]["intent"] == "scale")
        ]
        correct_set = set(eligible[: targets[method]])
        fail_pool = [pos for pos in order if pos not in correct_set]
        fail_set = set(fail_pool[: parse_fail.get(method, 0)])
        for pos, t in enumerate(tasks):
            if pos in fail_set:
                text = malformed_output(method)
            elif pos in correct_set:
                text = correct_output(method, t)
            else:
                text = wrong_output(method, t, rng)
            responses.append(entry(method, t["instruction"], text, rng))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


# ---------------------------------------------------------------------- pass@k demo

def build_passk_demo():
    base = hard_pack_tasks()[:6]
    suite = {
        "name": "passk_demo",
        "scene": "default",
        "methods": ["simple_cga", "compact_se3"],
        "policy_k": 3,
        "trials_per_task": 1,
        "tasks": [
            {
                "id": t["id"],
                "instruction": t["instruction"],
                "semantic_rules": t["semantic_rules"],
                "expected_positions": t["expected_positions"],
            }
            for t in base
        ],
    }
    rng = random.Random(5)
    responses = []
    for i, t in enumerate(base):
        for method in ["simple_cga", "compact_se3"]:
            good = correct_output(method, t)
            if i < 2:
                # malformed first attempt, recovery on the second
                responses.append(entry(method, t["instruction"], malformed_output(method), rng, attempt=0))
                responses.append(entry(method, t["instruction"], good, rng, attempt=1))
                responses.append(entry(method, t["instruction"], good, rng, attempt=2))
            elif i == 2 and method == "simple_cga":
                # never recovers: all three attempts malformed
                for a in range(3):
                    responses.append(entry(method, t["instruction"], malformed_output(method), rng, attempt=a))
            else:
                responses.append(entry(method, t["instruction"], good, rng))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


# -------------------------------------------------------------------------- ablation

def build_ablation():
    base = hard_pack_tasks()[:10]
    conditions = ["simple_cga", "simple_cga_verbose", "shenlong_cga", "euclidean_mat4"]
    suite = {
        "name": "ablation_grid",
        "scene": "default",
        "methods": conditions,
        "policy_k": 1,
        "trials_per_task": 5,
        "tasks": [
            {
                "id": t["id"],
                "instruction": t["instruction"],
                "semantic_rules": t["semantic_rules"],
                "expected_positions": t["expected_positions"],
            }
            for t in base
        ],
    }
    rng = random.Random(11)
    responses = []
    shenlong_fail = {3, 7}  # 8/10 parse for the shenlong condition
    for i, t in enumerate(base, start=1):
        for method in conditions:
            lookup = "shenlong_cga" if method == "shenlong_cga" else method
            if method == "shenlong_cga" and i in shenlong_fail:
                text = malformed_output(lookup)
            else:
                text = correct_output(lookup if lookup in TOKEN_PROFILE else "simple_cga", t)
            responses.append(entry(method, t["instruction"], text, rng))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


# --------------------------------------------------------------------------- core 33

def build_core33():
    """Core benchmark blocks: 8 + 6 + 6 + 18 + 10 tasks (expanded spatial)."""
    scene = default_scene()

    tasks = []
    rng = random.Random(33)

    def add(block, instruction, object_name, intent, scene_override=None, context_limit=None,
            **kw):
        tasks.append({
            "id": f"{block}-{len(tasks) + 1:02d}",
            "instruction": instruction,
            "object": object_name,
            "intent": intent,
            "scene_override": scene_override,
            "context_limit": context_limit,
            "start": kw.pop("start", scene.get(object_name).center if scene_override is None else None),
            **kw,
        })

    # 5-object block (n=8): translate, stack, scale, rotate, compose-ish mix.
    add("5obj", "Move the red sphere 2 units along positive X.", "RedSphere", "translate",
        delta=[2.0, 0.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "RedSphere", "delta": [2.0, 0.0, 0.0]}])
    add("5obj", "Place the green sphere on top of the blue cube.", "GreenSphere", "translate",
        delta=[7.0, 1.7, -2.0],
        rules=[{"rule": "surface_contact", "mover": "GreenSphere", "target": "BlueCube", "axis": 1}])
    add("5obj", "Scale the purple sphere by a factor of 2.", "PurpleSphere", "scale", factor=2.0,
        rules=[{"rule": "scale_factor", "mover": "PurpleSphere", "s": 2.0}])
    add("5obj", "Rotate the blue cube 90 degrees in the XY plane.", "BlueCube", "rotate_z",
        angle=math.pi / 2,
        rules=[{"rule": "absolute_placement", "mover": "BlueCube", "position": [0.0, 4.0, 0.0]}])
    add("5obj", "Shift the yellow cube by (-1, 2, 0).", "YellowCube", "translate",
        delta=[-1.0, 2.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "YellowCube", "delta": [-1.0, 2.0, 0.0]}])
    add("5obj", "Move the green sphere next to the blue cube, left side.", "GreenSphere",
        "translate", delta=[5.3, 0.0, 0.0],
        rules=[{"rule": "surface_contact", "mover": "GreenSphere", "target": "BlueCube", "axis": 0}])
    add("5obj", "Move the red sphere and leave it 3 units higher.", "RedSphere", "translate",
        delta=[0.0, 3.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "RedSphere", "delta": [0.0, 3.0, 0.0]}])
    add("5obj", "Drop the purple sphere between the red sphere and the blue cube.",
        "PurpleSphere", "translate", delta=[2.0, 0.0, 4.0],
        rules=[{"rule": "midpoint", "mover": "PurpleSphere", "a": "RedSphere", "b": "BlueCube"}])

    # Stress block (n=6).
    add("stress", "Rotate the red sphere by 1 radian in the XY plane.", "RedSphere", "rotate_z",
        angle=1.0, rules=[{"rule": "absolute_placement", "mover": "RedSphere",
                           "position": [0.0, 0.0, 0.0]}])
    add("stress", "Translate the green sphere by (2, 0, 0).", "GreenSphere", "translate",
        delta=[2.0, 0.0, 0.0],
        rules=[{"rule": "target_displacement", "mover": "GreenSphere", "delta": [2.0, 0.0, 0.0]}])
    add("stress", "Move the yellow cube 5 units toward the viewer.", "YellowCube", "translate",
        delta=[0.0, 0.0, 5.0],
        rules=[{"rule": "target_displacement", "mover": "YellowCube", "delta": [0.0, 0.0, 5.0]}])
    add("stress", "Rotate the purple sphere 270 degrees in the XY plane.", "PurpleSphere",
        "rotate_z", angle=3 * math.pi / 2,
        rules=[{"rule": "absolute_placement", "mover": "PurpleSphere", "position": [0.0, 0.0, -4.0]}])
    add("stress", "Scale the blue cube by 1.5.", "BlueCube", "scale", factor=1.5,
        rules=[{"rule": "scale_factor", "mover": "BlueCube", "s": 1.5}])
    add("stress", "Stack the red sphere on the yellow cube.", "RedSphere", "translate",
        delta=[4.0, 2.0, -3.0],
        rules=[{"rule": "surface_contact", "mover": "RedSphere", "target": "YellowCube", "axis": 1}])

    # 10-object block (n=6) on a seeded large scene.
    ten = None
    from cgascene.bench import generate_large_scene
    ten = generate_large_scene(10, 0)
    ten_names = list(ten.objects)
    for k in range(6):
        name = ten_names[k]
        start = ten.get(name).center
        delta = [float(rng.choice([-2, -1, 1, 2])) for _ in range(3)]
        add("10obj", f"Move {name} by ({delta[0]:g}, {delta[1]:g}, {delta[2]:g}).", name,
            "translate", scene_override="large:10", delta=delta, start=start,
            rules=[{"rule": "target_displacement", "mover": name, "delta": delta}])

    # Expanded spatial-accuracy block (n=18): exact placements.
    for k in range(18):
        name = ["RedSphere", "BlueCube", "GreenSphere", "YellowCube", "PurpleSphere"][k % 5]
        start = scene.get(name).center
        target = [float(rng.randint(-6, 6)), float(rng.randint(0, 5)), float(rng.randint(-6, 6))]
        delta = [t - s for t, s in zip(target, start)]
        add("spatial", f"Move the {scene.get(name).color} {scene.get(name).shape} to exactly "
            f"({target[0]:g}, {target[1]:g}, {target[2]:g}).", name, "translate",
            delta=delta, expected={name: target},
            rules=[{"rule": "absolute_placement", "mover": name, "position": target}])

    # 100-object block (n=10, 30-object context).
    hundred = generate_large_scene(100, 0)
    hundred_names = list(hundred.objects)
    for k in range(10):
        name = hundred_names[k * 7]
        start = hundred.get(name).center
        delta = [float(rng.choice([-3, -2, 2, 3])), 0.0, float(rng.choice([-2, 2]))]
        add("100obj", f"Move {name} by ({delta[0]:g}, {delta[1]:g}, {delta[2]:g}).", name,
            "translate", scene_override="large:100", context_limit=30, delta=delta, start=start,
            rules=[{"rule": "target_displacement", "mover": name, "delta": delta}])

    assert len(tasks) == 48
    suite = {
        "name": "core33",
        "scene": "default",
        "methods": ["shenlong_cga", "simple_cga", "euclidean_mat4"],
        "policy_k": 3,
        "trials_per_task": 1,
        "tasks": [],
    }
    for t in tasks:
        task_doc = {
            "id": t["id"],
            "instruction": t["instruction"],
            "semantic_rules": t.get("rules", []),
            "expected_positions": t.get("expected", {}),
        }
        if t.get("scene_override"):
            task_doc["scene"] = t["scene_override"]
        if t.get("context_limit"):
            task_doc["context_limit"] = t["context_limit"]
        suite["tasks"].append(task_doc)

    rng2 = random.Random(3333)
    responses = []
    for t in tasks:
        for method in ["shenlong_cga", "simple_cga", "euclidean_mat4"]:
            responses.append(entry(method, t["instruction"], correct_output(method, t), rng2))
    fixture = {"version": 1, "default": {"text": ""}, "responses": responses}
    return suite, fixture


def write(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {path}")


def main() -> None:
    builders = {
        "hard_pack": build_hard_pack,
        "sequence_stress": build_sequence_stress,
        "powered_hard": build_powered_hard,
        "passk_demo": build_passk_demo,
        "ablation_grid": build_ablation,
        "core33": build_core33,
    }
    for name, builder in builders.items():
        suite, fixture = builder()
        write(OUT_SUITES / f"{name}.json", suite)
        write(OUT_FIXTURES / f"{name}_mock.json", fixture)


if __name__ == "__main__":
    main()
