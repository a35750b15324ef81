#!/usr/bin/env python3
"""Evaluation worker for the built-in tasks, running candidates as real Python.

Reads one JSON request line from stdin and writes one JSON response line to
stdout (see docs/worker_protocol.md). Instances are regenerated from the seed
with the same generator and placement rules as the in-process evaluators.
"""

import json
import math
import sys
import traceback

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53

    def uniform_int(self, lo, hi):
        return lo + self.next() % (hi - lo + 1)


class CandidateError(Exception):
    pass


def load(code, name, arity):
    scope = {"math": math, "__name__": "candidate"}
    try:
        compiled = compile(code, "<candidate>", "exec")
    except SyntaxError as exc:
        raise SyntaxError(f"line {exc.lineno}: {exc.msg}") from None
    exec(compiled, scope)
    fn = scope.get(name)
    if not callable(fn):
        fns = [v for k, v in scope.items() if callable(v) and getattr(v, "__module__", None) == "candidate"]
        if not fns:
            raise SyntaxError(f"no function named {name}")
        fn = fns[0]
    if fn.__code__.co_argcount != arity:
        raise SyntaxError(f"function takes {fn.__code__.co_argcount} parameters, expected {arity}")
    return fn


def score(value):
    v = float(value)
    if not math.isfinite(v):
        raise CandidateError(f"non-finite value {value!r}")
    return v


def obp(fn, seed, count):
    rng = SplitMix64(seed)
    capacity, total_score = 100, 0.0
    instances = [[rng.uniform_int(1, capacity) for _ in range(500)] for _ in range(count)]
    for items in instances:
        remaining = []
        for size in items:
            best, best_score = -1, 0.0
            for b, rem in enumerate(remaining):
                if rem < size:
                    continue
                s = score(fn(float(size), float(rem)))
                if best < 0 or s > best_score:
                    best, best_score = b, s
            if best < 0:
                remaining.append(capacity - size)
            else:
                remaining[best] -= size
        lower = -(-sum(items) // capacity)
        total_score += len(remaining) / lower - 1.0
    return total_score / count


def tsp(fn, seed, count, cities=50):
    rng = SplitMix64(seed)
    total = 0.0
    for _ in range(count):
        pts = []
        for _ in range(cities):
            x = rng.uniform()
            y = rng.uniform()
            pts.append((x, y))
        n = len(pts)
        d = [[math.hypot(p[0] - q[0], p[1] - q[1]) for q in pts] for p in pts]
        visited = [False] * n
        visited[0] = True
        tour, current = [0], 0
        for step in range(1, n):
            remaining = n - step
            best, best_score = -1, 0.0
            for j in range(n):
                if visited[j]:
                    continue
                acc = 0.0
                for k in range(n):
                    if not visited[k] and k != j:
                        acc += d[j][k]
                mean = acc / (remaining - 1) if remaining > 1 else 0.0
                s = score(fn(d[current][j], d[j][0], mean, float(remaining)))
                if best < 0 or s > best_score:
                    best, best_score = j, s
            current = best
            visited[current] = True
            tour.append(current)
        total += sum(d[tour[i]][tour[(i + 1) % n]] for i in range(n))
    return total / count


def sr_growth(fn, seed, count):
    rng = SplitMix64(seed)
    sq = 0.0
    for _ in range(count):
        x = 0.5 + 9.5 * rng.uniform()
        s = 0.1 + 4.9 * rng.uniform()
        target = 0.8 * x * (1 - x / 10) * s / (s + 2)
        r = score(fn(x, s)) - target
        sq += r * r
    return math.sqrt(sq / count)


TASKS = {
    "obp": ("priority", 2, obp),
    "tsp_construct": ("select_next", 4, tsp),
    "sr_growth": ("growth", 2, sr_growth),
}


def handle(request):
    task_id = request["task_id"]
    if task_id not in TASKS:
        return {"status": "error", "scores": [], "detail": f"unknown task {task_id!r}"}
    name, arity, run = TASKS[task_id]
    count = int(request["instance_count"])
    if count < 1:
        return {"status": "error", "scores": [], "detail": "instance_count must be >= 1"}
    try:
        fn = load(request["candidate_code"], name, arity)
    except SyntaxError as exc:
        return {"status": "parse_error", "scores": [], "detail": str(exc)}
    except Exception:
        return {"status": "error", "scores": [], "detail": traceback.format_exc(limit=3)}
    try:
        value = run(fn, int(request["instance_seed"]), count)
    except Exception:
        return {"status": "error", "scores": [], "detail": traceback.format_exc(limit=3)}
    if not math.isfinite(value):
        return {"status": "error", "scores": [], "detail": "non-finite fitness"}
    return {"status": "ok", "scores": [value], "detail": ""}


def main():
    line = sys.stdin.readline()
    try:
        request = json.loads(line)
    except ValueError as exc:
        response = {"status": "error", "scores": [], "detail": f"bad request: {exc}"}
    else:
        response = handle(request)
    sys.stdout.write(json.dumps(response) + "\n")
    sys.stdout.flush()


if __name__ == "__main__":
    main()
