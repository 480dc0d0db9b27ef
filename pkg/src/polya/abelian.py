"""Structure of a finite abelian group given by an element list and a product."""

from __future__ import annotations

from typing import Callable, Hashable, Sequence

from .arith import factor


class FiniteAbelianGroup:
    """Explicit finite abelian group; elements are hashable tokens."""

    def __init__(self, elements: Sequence[Hashable], mul: Callable, identity: Hashable):
        self.elements = list(elements)
        self.mul = mul
        self.identity = identity
        if identity not in set(self.elements):
            raise ValueError("identity missing from element list")

    def __len__(self):
        return len(self.elements)

    def power(self, x, k):
        result, base = self.identity, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def order_of(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def two_rank(self):
        kernel = sum(1 for x in self.elements if self.mul(x, x) == self.identity)
        return kernel.bit_length() - 1

    def invariants(self):
        """Invariant factors d1 | d2 | ... | dk (all > 1), smallest first."""
        h = len(self.elements)
        if h == 1:
            return []
        per_prime = {}
        for p, e in factor(h):
            if e == 1:
                per_prime[p] = [1]
                continue
            table = {x: self.power(x, p) for x in self.elements}
            current = {x: x for x in self.elements}
            logs = [0]
            for _ in range(e):
                current = {x: table[y] for x, y in current.items()}
                killed = sum(1 for y in current.values() if y == self.identity)
                logs.append(_exact_log(killed, p))
                if logs[-1] == e:
                    break
            # at_least[j] = number of cyclic p-factors of exponent >= j
            at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
            exps = []
            for j, cnt in enumerate(at_least, start=1):
                nxt = at_least[j] if j < len(at_least) else 0
                exps += [j] * (cnt - nxt)
            per_prime[p] = sorted(exps, reverse=True)
        k = max(len(v) for v in per_prime.values())
        divisors = [1] * k
        for p, exps in per_prime.items():
            for idx, ex in enumerate(exps):
                divisors[k - 1 - idx] *= p**ex
        return divisors

    def structure(self):
        """(invariant factors, generators) with generator i of exact order divisors[i]."""
        divisors = self.invariants()
        gens = [None] * len(divisors)
        subgroup = {self.identity}
        for slot in reversed(range(len(divisors))):
            d = divisors[slot]
            primes = [p for p, _ in factor(d)]
            for x in self.elements:
                if x in subgroup or self.power(x, d) != self.identity:
                    continue
                if all(self.power(x, d // q) not in subgroup for q in primes):
                    break
            else:  # pragma: no cover - excluded by the basis theorem
                raise RuntimeError("no basis element found; group is not abelian?")
            gens[slot] = x
            powers = [self.identity]
            for _ in range(d - 1):
                powers.append(self.mul(powers[-1], x))
            subgroup = {self.mul(s, y) for s in subgroup for y in powers}
        assert len(subgroup) == len(self.elements)
        return divisors, gens


def _exact_log(n, p):
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def closure(generators, mul, identity):
    """Subgroup generated by ``generators`` (finite group), as a sorted-by-discovery list."""
    elems = [identity]
    seen = {identity}
    for g in generators:
        if g in seen:
            continue
        frontier = list(elems)
        while frontier:
            new = []
            for e in frontier:
                y = mul(e, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
            elems += new
            frontier = new
    return elems
