#!/usr/bin/env python3
"""Regenerate the bundled benchmark circuits in benchmarks/.

Every circuit is written with the gate set the router reads: multi-controlled
gates are expanded into cx and single-qubit gates here.
"""

import math
import os
import random
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "benchmarks")


class Prog:
    def __init__(self, n, cbits=0):
        self.n = n
        self.cbits = cbits
        self.lines = []

    def g(self, name, *qs, params=()):
        p = "(" + ",".join(fmt(x) for x in params) + ")" if params else ""
        self.lines.append(f"{name}{p} " + ",".join(f"q[{q}]" for q in qs) + ";")

    def measure_all(self):
        self.cbits = self.n
        for q in range(self.n):
            self.lines.append(f"measure q[{q}] -> c[{q}];")

    def text(self, comment):
        head = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"// {comment}", f"qreg q[{self.n}];"]
        if self.cbits:
            head.append(f"creg c[{self.cbits}];")
        return "\n".join(head + self.lines) + "\n"


def fmt(x):
    if isinstance(x, str):
        return x
    return repr(round(x, 12))


def ccx(p, a, b, t):
    p.g("h", t)
    p.g("cx", b, t)
    p.g("tdg", t)
    p.g("cx", a, t)
    p.g("t", t)
    p.g("cx", b, t)
    p.g("tdg", t)
    p.g("cx", a, t)
    p.g("t", b)
    p.g("t", t)
    p.g("h", t)
    p.g("cx", a, b)
    p.g("t", a)
    p.g("tdg", b)
    p.g("cx", a, b)


def toffoli():
    p = Prog(3)
    p.g("x", 0)
    p.g("x", 1)
    ccx(p, 0, 1, 2)
    return p


def cu1(p, lam, a, b):
    p.g("u1", a, params=(lam / 2,))
    p.g("cx", a, b)
    p.g("u1", b, params=(-lam / 2,))
    p.g("cx", a, b)
    p.g("u1", b, params=(lam / 2,))


def qft(n):
    p = Prog(n)
    for i in range(n):
        p.g("h", i)
        for j in range(i + 1, n):
            cu1(p, math.pi / 2 ** (j - i), j, i)
    return p


def ghz(n):
    p = Prog(n)
    p.g("h", 0)
    for i in range(n - 1):
        p.g("cx", i, i + 1)
    p.measure_all()
    return p


def bv(n, secret):
    p = Prog(n)
    anc = n - 1
    p.g("x", anc)
    for q in range(n):
        p.g("h", q)
    for q in range(n - 1):
        if secret >> q & 1:
            p.g("cx", q, anc)
    for q in range(n - 1):
        p.g("h", q)
    return p


def ising(n, steps):
    p = Prog(n)
    for q in range(n):
        p.g("h", q)
    for s in range(steps):
        for start in (0, 1):
            for q in range(start, n - 1, 2):
                p.g("cx", q, q + 1)
                p.g("rz", q + 1, params=(0.3 + 0.1 * s,))
                p.g("cx", q, q + 1)
        for q in range(n):
            p.g("rx", q, params=(0.7,))
    return p


def chain(n, layers):
    # interactions only between neighbours on a path, h in between so no
    # gate can overtake another
    p = Prog(n)
    for _ in range(layers):
        for q in range(n):
            p.g("h", q)
        for q in range(n - 1):
            p.g("cx", q, q + 1)
            p.g("h", q)
    return p


def cuccaro(bits):
    # a_i, b_i interleaved after the carry-in, one carry-out
    n = 2 * bits + 2
    p = Prog(n)
    cin, cout = 0, n - 1
    a = [1 + 2 * i for i in range(bits)]
    b = [2 + 2 * i for i in range(bits)]

    def maj(x, y, z):
        p.g("cx", z, y)
        p.g("cx", z, x)
        ccx(p, x, y, z)

    def uma(x, y, z):
        ccx(p, x, y, z)
        p.g("cx", z, x)
        p.g("cx", x, y)

    # fixed nonzero input so the adder does real work
    for i in range(bits):
        if i % 2 == 0:
            p.g("x", a[i])
        if i % 3 == 0:
            p.g("x", b[i])
    maj(cin, b[0], a[0])
    for i in range(1, bits):
        maj(a[i - 1], b[i], a[i])
    p.g("cx", a[-1], cout)
    for i in range(bits - 1, 0, -1):
        uma(a[i - 1], b[i], a[i])
    uma(cin, b[0], a[0])
    return p


def toffoli_net(n, count, seed):
    rnd = random.Random(seed)
    p = Prog(n)
    for _ in range(count):
        kind = rnd.random()
        qs = rnd.sample(range(n), 3)
        if kind < 0.6:
            ccx(p, *qs)
        elif kind < 0.9:
            p.g("cx", qs[0], qs[1])
        else:
            p.g("x", qs[0])
    return p


def qaoa(n, degree_edges, rounds, seed):
    rnd = random.Random(seed)
    edges = set()
    while len(edges) < degree_edges:
        a, b = rnd.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    p = Prog(n)
    for q in range(n):
        p.g("h", q)
    for r in range(rounds):
        for a, b in sorted(edges):
            p.g("cx", a, b)
            p.g("rz", b, params=(0.8 + 0.2 * r,))
            p.g("cx", a, b)
        for q in range(n):
            p.g("rx", q, params=(1.1,))
    p.measure_all()
    return p


def grover3(iterations):
    p = Prog(3)
    for q in range(3):
        p.g("h", q)
    for _ in range(iterations):
        # oracle marks |111>
        p.g("h", 2)
        ccx(p, 0, 1, 2)
        p.g("h", 2)
        for q in range(3):
            p.g("h", q)
            p.g("x", q)
        p.g("h", 2)
        ccx(p, 0, 1, 2)
        p.g("h", 2)
        for q in range(3):
            p.g("x", q)
            p.g("h", q)
    p.measure_all()
    return p


def incrementer(n):
    # carry cascade of a counter register with one work qubit
    p = Prog(n)
    w = n - 1
    for top in range(n - 2, 0, -1):
        ccx(p, top - 1, top, w)
        p.g("cx", w, top)
        ccx(p, top - 1, top, w)
    p.g("x", 0)
    return p


BENCHES = {
    "toffoli_3": (lambda: toffoli(), "single Toffoli, Clifford+T form"),
    "grover_3": (lambda: grover3(2), "two Grover iterations on three qubits"),
    "qft_4": (lambda: qft(4), "quantum Fourier transform, controlled phases expanded"),
    "chain_n5": (lambda: chain(5, 4), "nearest-neighbour chain, embeddable without swaps"),
    "toffoli_net_5": (lambda: toffoli_net(5, 12, 5), "random reversible Toffoli network"),
    "qft_6": (lambda: qft(6), "quantum Fourier transform, controlled phases expanded"),
    "cuccaro_adder_4": (lambda: cuccaro(4), "ripple-carry adder, 4-bit operands"),
    "ghz_8": (lambda: ghz(8), "GHZ state preparation"),
    "qaoa_8": (lambda: qaoa(8, 12, 2, 8), "QAOA max-cut, 12 random edges, p=2"),
    "incrementer_8": (lambda: incrementer(8), "carry cascade incrementer"),
    "bv_10": (lambda: bv(10, 0b101101011), "Bernstein-Vazirani, 9-bit secret"),
    "ising_10": (lambda: ising(10, 3), "transverse-field Ising chain, 3 Trotter steps"),
    "toffoli_net_10": (lambda: toffoli_net(10, 30, 10), "random reversible Toffoli network"),
    "qft_12": (lambda: qft(12), "quantum Fourier transform, controlled phases expanded"),
    "cuccaro_adder_7": (lambda: cuccaro(7), "ripple-carry adder, 7-bit operands"),
    "qaoa_16": (lambda: qaoa(16, 24, 1, 16), "QAOA max-cut, 24 random edges, p=1"),
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, (build, comment) in BENCHES.items():
        prog = build()
        with open(os.path.join(OUT, name + ".qasm"), "w", newline="\n") as f:
            f.write(prog.text(comment))
    print(f"wrote {len(BENCHES)} circuits to {os.path.normpath(OUT)}", file=sys.stderr)


if __name__ == "__main__":
    main()
