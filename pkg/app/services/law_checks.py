"""Exhaustive and seeded checks of the structural laws behind the identities.

Each check returns a `LawReport`; a failing check lists its first few
counterexamples instead of raising, so selftest can collect every outcome.
"""
import logging
import random
from collections import Counter
from typing import Any, Callable, Dict, Iterable, List

import orjson

from app.models.characters import CharacterForm
from app.models.errors import SignBalanceError
from app.models.identity import IdentityParams, LawReport
from app.models.involution import HatVariant, InvolutionTag, SignClass
from app.models.permutation import ColoredPermutation, FamilyKind, FamilySpec, RestrictionTuple
from app.models.statistics import OrderTag
from app.services.algebra.cyclotomic import omega_power
from app.services.algebra.polynomial import Poly
from app.services.barred_service import barred_service
from app.services.character_service import character_service
from app.services.folding_service import folding_service
from app.services.identity_registry import identity_registry
from app.services.involution_service import involution_service
from app.services.permutation_service import permutation_service
from app.services.statistics_service import statistics_service
from app.services.summands import SignRule, Stat, sign_parity, stat_value

logger = logging.getLogger(__name__)

MAX_FAILURES = 5

# (sign rules that flip off the fixed points, statistics that must be preserved)
_INVOLUTION_LAWS = {
    InvolutionTag.PHI: ([SignRule.LENGTH_G], ["z", "Des_F"]),
    InvolutionTag.ETA: ([SignRule.LENGTH_D], [Stat.DDES, Stat.DMAJ, "z"]),
    InvolutionTag.IOTA: ([SignRule.LENGTH_D], [Stat.DDES, Stat.DMAJ, "z"]),
    InvolutionTag.PSI_B: ([SignRule.ABS_INV], ["Des_B"]),
    InvolutionTag.PSI_D: ([SignRule.LENGTH_D], ["Des_D"]),
    InvolutionTag.THETA: ([SignRule.NEG, SignRule.LENGTH_B], ["Des_B"]),
}

_HAT_DOMAIN = {
    HatVariant.G_EVEN: InvolutionTag.PHI,
    HatVariant.B_ODD: InvolutionTag.PHI,
    HatVariant.D_EVEN: InvolutionTag.ETA,
    HatVariant.D_ODD: InvolutionTag.IOTA,
}


class _Tally:
    """Counts cases and keeps the first few failures"""

    def __init__(self, name: str, params: Dict[str, Any]):
        self.name = name
        self.params = params
        self.checked = 0
        self.failed = 0
        self.failures: List[str] = []

    def case(self):
        self.checked += 1

    def fail(self, message: str):
        self.failed += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)

    def expect(self, condition: bool, message: Callable[[], str]):
        if not condition:
            self.fail(message())

    def report(self) -> LawReport:
        passed = self.failed == 0
        if passed:
            logger.info(f"✅ {self.name} {self.params}: {self.checked} cases")
        else:
            logger.warning(f"❌ {self.name} {self.params}: {self.failed} of {self.checked} cases fail")
        return LawReport(
            name=self.name, params=self.params, passed=passed, checked=self.checked, failures=self.failures
        )


def _w(p: ColoredPermutation) -> str:
    return permutation_service.format_window(p)


def _preserved(p: ColoredPermutation, key) -> Any:
    if key == "z":
        return p.z
    if key == "Des_F":
        return statistics_service.flag_stats(p).des_set
    if key == "Des_B":
        return statistics_service.type_b_descents(p).des_set
    if key == "Des_D":
        return statistics_service.type_d_descents(p).des_set
    return stat_value(p, key)


def _odd_parity(value: int) -> int:
    return value % 2


class LawCheckService:
    # Involutions

    def involution_laws(self, tag: InvolutionTag, spec: FamilySpec) -> LawReport:
        """Self-inverse, sign reversal off the fixed points, preserved statistics"""
        tally = _Tally("involution-laws", {"tag": tag.value, "family": spec.kind.value, "r": spec.r, "n": spec.n})
        flips, kept = _INVOLUTION_LAWS[tag]
        if tag == InvolutionTag.PHI and spec.n % 2:
            flips, kept = [SignRule.ABS_INV, SignRule.LENGTH_B], [Stat.FDES, "z"]
        involution_service.domain_family(tag, spec)
        for p in permutation_service.enumerate_family(spec):
            tally.case()
            try:
                image = involution_service.involute(tag, p)
                back = involution_service.involute(tag, image)
            except SignBalanceError as e:
                tally.fail(f"{_w(p)}: {e}")
                continue
            tally.expect(back == p, lambda: f"{_w(p)} -> {_w(image)} -> {_w(back)}")
            if image == p:
                continue
            for rule in flips:
                tally.expect(
                    _odd_parity(sign_parity(p, rule)) != _odd_parity(sign_parity(image, rule)),
                    lambda: f"{rule.value} sign kept by {_w(p)} -> {_w(image)}",
                )
            for key in kept:
                tally.expect(
                    _preserved(p, key) == _preserved(image, key),
                    lambda: f"{getattr(key, 'value', key)} changed by {_w(p)} -> {_w(image)}",
                )
        return tally.report()

    def fixed_point_agreement(self, tag: InvolutionTag, spec: FamilySpec) -> LawReport:
        tally = _Tally("fixed-points", {"tag": tag.value, "family": spec.kind.value, "r": spec.r, "n": spec.n})
        structural = Counter(involution_service.fixed_points(tag, spec))
        filtered = set(involution_service.fixed_points_by_filter(tag, spec))
        for p, count in sorted(structural.items()):
            tally.case()
            tally.expect(count == 1, lambda: f"{_w(p)} generated {count} times")
            tally.expect(p in filtered, lambda: f"{_w(p)} is not fixed")
        for p in sorted(filtered - set(structural)):
            tally.fail(f"{_w(p)} is fixed but not generated")
        return tally.report()

    # Hat bijections

    def hat_domain(self, variant: HatVariant, r: int, n: int) -> FamilySpec:
        """The family whose fixed points `variant` folds; n is the half size"""
        if variant == HatVariant.G_EVEN:
            return FamilySpec.colored(r, 2 * n)
        if variant == HatVariant.B_ODD:
            return FamilySpec.hyperoctahedral(2 * n + 1)
        if variant == HatVariant.D_EVEN:
            return FamilySpec.even_signed(2 * n)
        return FamilySpec.even_signed(2 * n + 1)

    def hat_laws(self, variant: HatVariant, n: int, r: int = 2) -> LawReport:
        """Roundtrip, injectivity, image count and the statistic-transfer laws"""
        tally = _Tally("hat-laws", {"variant": variant.value, "r": r, "n": n})
        spec = self.hat_domain(variant, r, n)
        images = set()
        for p in involution_service.fixed_points(_HAT_DOMAIN[variant], spec):
            tally.case()
            try:
                h = folding_service.hat_forward(variant, p)
                back = folding_service.hat_backward(variant, h)
            except SignBalanceError as e:
                tally.fail(f"{_w(p)}: {e}")
                continue
            tally.expect(back == p, lambda: f"{_w(p)} does not come back ({_w(back)})")
            tally.expect(h not in images, lambda: f"{_w(p)} repeats the image {_w(h.base)} {sorted(h.hats)}")
            images.add(h)
            self._transfer_laws(variant, p, h, tally)

        small = {
            HatVariant.G_EVEN: FamilySpec.colored(r, n),
            HatVariant.B_ODD: FamilySpec.hyperoctahedral(n + 1),
            HatVariant.D_EVEN: FamilySpec.even_signed(n),
            HatVariant.D_ODD: FamilySpec.even_signed(n + 1),
        }[variant]
        expected = 2 ** n * permutation_service.family_size(small)
        tally.expect(len(images) == expected, lambda: f"{len(images)} images, expected {expected}")
        return tally.report()

    def _transfer_laws(self, variant: HatVariant, p: ColoredPermutation, h, tally: _Tally):
        base = h.base
        part = folding_service.hat_partition(h)
        hats = len(part.P)
        where = f"{_w(p)} -> {_w(base)} hats {part.P}"

        if variant == HatVariant.G_EVEN:
            r = p.r
            big, small = statistics_service.flag_stats(p), statistics_service.flag_stats(base)
            tally.expect(big.col == 2 * small.col, lambda: f"col law fails for {where}")
            tally.expect(big.fdes == small.fdes + r * hats, lambda: f"fdes law fails for {where}")
            tally.expect(
                big.fmaj == 2 * small.fmaj + r * sum(2 * i - 1 for i in part.P),
                lambda: f"fmaj law fails for {where}",
            )
            des_f = {2 * i for i in small.des_set} | {2 * i - 1 for i in part.P}
            tally.expect(big.des_set == des_f, lambda: f"Des_F law fails for {where}")
            inv = (
                4 * statistics_service.inversions(base, OrderTag.ORDER_L)
                + len(part.P_N)
                - len(part.P_C)
                + sum(1 for c in base.z if c)
            )
            tally.expect(
                statistics_service.inversions(p, OrderTag.ORDER_L) == inv, lambda: f"inv law fails for {where}"
            )
            for label in character_service.labels(r):
                if label.a != 1:
                    continue
                value = omega_power(r, 2 * label.b * small.col)
                expected = -value if hats % 2 else value
                tally.expect(
                    character_service.chi(label, p) == expected, lambda: f"χ_{label.key} law fails for {where}"
                )
            return

        if variant == HatVariant.B_ODD:
            big, small = statistics_service.flag_stats(p), statistics_service.flag_stats(base)
            k = base.sigma.index(base.n) + 1
            tally.expect(
                _odd_parity(sign_parity(p, SignRule.ABS_INV)) == len(part.L) % 2,
                lambda: f"|π| inversion sign law fails for {where}",
            )
            tally.expect(big.fdes == small.fdes + 2 * len(part.L), lambda: f"fdes law fails for {where}")
            sgm = statistics_service.d_stats(base).sgm
            tally.expect(
                _odd_parity(sign_parity(p, SignRule.LENGTH_B)) == (hats + sgm) % 2,
                lambda: f"ℓ_B sign law fails for {where}",
            )
            des_f = (
                {2 * i for i in small.des_set if i < k}
                | {2 * i - 1 for i in small.des_set if i >= k}
                | {2 * i - 1 for i in part.P if i < k}
                | {2 * i - 2 for i in part.P if i > k}
            )
            tally.expect(big.des_set == des_f, lambda: f"Des_F law fails for {where}")
            return

        big, small = statistics_service.d_stats(p), statistics_service.d_stats(base)
        tally.expect(
            _odd_parity(sign_parity(p, SignRule.LENGTH_D)) == hats % 2, lambda: f"ℓ_D sign law fails for {where}"
        )
        tally.expect(big.ddes == small.ddes + 2 * hats, lambda: f"ddes law fails for {where}")
        if variant == HatVariant.D_EVEN:
            tally.expect(
                big.dmaj == 2 * small.dmaj + sum(4 * i - 2 for i in part.P), lambda: f"dmaj law fails for {where}"
            )
            neg = {j for i, c in enumerate(base.z[:-1], start=1) if c for j in (2 * i - 1, 2 * i)}
            tally.expect(
                statistics_service.flag_stats(p).neg_set == neg, lambda: f"Neg law fails for {where}"
            )

    def straighten_laws(self, tag: InvolutionTag, n: int) -> LawReport:
        """Descent-set and sign-parity laws of the straightening map onto I_n"""
        tally = _Tally("straighten-laws", {"tag": tag.value, "n": n})
        spec = FamilySpec.hyperoctahedral(n) if tag == InvolutionTag.PSI_B else FamilySpec.even_signed(n)
        identity = tuple(range(1, n + 1))
        images = set()
        for p in involution_service.fixed_points(tag, spec):
            tally.case()
            try:
                image = folding_service.straighten(tag, p)
            except SignBalanceError as e:
                tally.fail(f"{_w(p)}: {e}")
                continue
            where = f"{_w(p)} -> {_w(image)}"
            tally.expect(image.sigma == identity, lambda: f"{where} is not in I_{n}")
            tally.expect(image not in images, lambda: f"{where} repeats an image")
            images.add(image)
            neg_set = statistics_service.flag_stats(image).neg_set
            descents = (
                statistics_service.type_b_descents(p)
                if tag == InvolutionTag.PSI_B
                else statistics_service.type_d_descents(p)
            )
            tally.expect(
                descents.des_set == frozenset(i - 1 for i in neg_set), lambda: f"descent law fails for {where}"
            )
            rule = SignRule.ABS_INV if tag == InvolutionTag.PSI_B else SignRule.LENGTH_D
            tail = 1 if n % 2 and p.z[-1] else 0
            tally.expect(
                _odd_parity(sign_parity(p, rule)) == (len(neg_set) + tail) % 2,
                lambda: f"sign parity law fails for {where}",
            )
        return tally.report()

    # Characters

    def character_multiplicativity(self, r: int, n: int, form: CharacterForm = CharacterForm.LENGTH) -> LawReport:
        tally = _Tally("character-multiplicativity", {"r": r, "n": n, "form": form.value})
        elements = list(permutation_service.enumerate_family(FamilySpec.colored(r, n)))
        labels = character_service.labels(r, form)
        values = {label.key: {p: character_service.chi(label, p) for p in elements} for label in labels}
        for p in elements:
            for q in elements:
                tally.case()
                pq = permutation_service.compose(p, q)
                for label in labels:
                    table = values[label.key]
                    tally.expect(
                        table[pq] == table[p] * table[q], lambda: f"χ_{label.key} on {_w(p)} · {_w(q)}"
                    )
        return tally.report()

    def character_multiplicativity_random(
        self, r: int, n: int, pairs: int, seed: int, form: CharacterForm = CharacterForm.LENGTH
    ) -> LawReport:
        tally = _Tally(
            "character-multiplicativity-random", {"r": r, "n": n, "pairs": pairs, "seed": seed, "form": form.value}
        )
        rng = random.Random(seed)
        labels = character_service.labels(r, form)
        for _ in range(pairs):
            p = permutation_service.random_element(r, n, rng)
            q = permutation_service.random_element(r, n, rng)
            pq = permutation_service.compose(p, q)
            tally.case()
            for label in labels:
                tally.expect(
                    character_service.chi(label, pq)
                    == character_service.chi(label, p) * character_service.chi(label, q),
                    lambda: f"χ_{label.key} on {_w(p)} · {_w(q)}",
                )
        return tally.report()

    def signed_character_table(self, n: int) -> LawReport:
        """The four length-form characters of B_n against their sign-statistic descriptions"""
        tally = _Tally("signed-character-table", {"n": n})
        reference = {
            "0,0": lambda p: 0,
            "0,1": lambda p: sign_parity(p, SignRule.NEG),
            "1,0": lambda p: sign_parity(p, SignRule.ABS_INV),
            "1,1": lambda p: sign_parity(p, SignRule.LENGTH_B),
        }
        labels = character_service.labels(2)
        for p in permutation_service.enumerate_family(FamilySpec.hyperoctahedral(n)):
            tally.case()
            for label in labels:
                sign = -1 if reference[label.key](p) % 2 else 1
                tally.expect(
                    character_service.chi(label, p).coeffs == (sign,), lambda: f"χ_{label.key} on {_w(p)}"
                )
        return tally.report()

    def character_value_sets(self, r: int, n: int) -> LawReport:
        """Both formulations give the same set of functions on G(r,1,n)"""
        tally = _Tally("character-value-sets", {"r": r, "n": n})
        elements = list(permutation_service.enumerate_family(FamilySpec.colored(r, n)))

        def functions(form: CharacterForm):
            return {tuple(character_service.chi(label, p) for p in elements) for label in character_service.labels(r, form)}

        length_form = functions(CharacterForm.LENGTH)
        classical = functions(CharacterForm.CLASSICAL)
        tally.checked = len(elements)
        tally.expect(length_form == classical, lambda: "the two character families differ")
        return tally.report()

    # Permutation core

    def bfs_oracle(self, kind: FamilyKind, r: int, n: int) -> LawReport:
        """Length function against breadth-first word length"""
        tally = _Tally("bfs-oracle", {"family": kind.value, "r": r, "n": n})
        distances = permutation_service.bfs_lengths(kind, r, n)
        spec = {
            FamilyKind.SYM: lambda: FamilySpec.sym(n),
            FamilyKind.B: lambda: FamilySpec.hyperoctahedral(n),
            FamilyKind.D: lambda: FamilySpec.even_signed(n),
            FamilyKind.G: lambda: FamilySpec.colored(r, n),
        }[kind]()
        size = permutation_service.family_size(spec)
        tally.expect(len(distances) == size, lambda: f"BFS reached {len(distances)} of {size} elements")
        for p, distance in sorted(distances.items()):
            tally.case()
            length = statistics_service.length(p, kind)
            tally.expect(length == distance, lambda: f"{_w(p)}: length {length}, word length {distance}")
        return tally.report()

    def generator_relations(self, kind: FamilyKind, r: int, n: int) -> LawReport:
        """Coxeter-type relations and the group law, checked on every element"""
        tally = _Tally("generator-relations", {"family": kind.value, "r": r, "n": n})
        spec = {
            FamilyKind.SYM: lambda: FamilySpec.sym(n),
            FamilyKind.B: lambda: FamilySpec.hyperoctahedral(n),
            FamilyKind.D: lambda: FamilySpec.even_signed(n),
            FamilyKind.G: lambda: FamilySpec.colored(r, n),
        }[kind]()
        gens = permutation_service.generators(kind, n)
        one = ColoredPermutation.identity(r, n)

        def word(p, letters):
            for g in letters:
                p = permutation_service.apply_generator(p, *g)
            return p

        relations = []
        for g in gens:
            order = r if g == (0, False) else 2
            relations.append((f"s{g[0]}^{order}", [g] * order, []))
        for a in gens:
            for b in gens:
                if a >= b:
                    continue
                m = self._braid_length(kind, a, b)
                left = [(a, b)[k % 2] for k in range(m)]
                right = [(b, a)[k % 2] for k in range(m)]
                relations.append((f"braid s{a[0]} s{b[0]} of length {m}", left, right))

        for p in permutation_service.enumerate_family(spec):
            tally.case()
            for name, left, right in relations:
                tally.expect(word(p, left) == word(p, right), lambda: f"{name} fails at {_w(p)}")
            inverse = permutation_service.inverse(p)
            tally.expect(
                permutation_service.compose(p, inverse) == one and permutation_service.compose(inverse, p) == one,
                lambda: f"inverse fails at {_w(p)}",
            )
            for g in gens:
                as_element = permutation_service.apply_generator(one, *g)
                tally.expect(
                    permutation_service.apply_generator(p, *g) == permutation_service.compose(p, as_element),
                    lambda: f"s{g[0]} is not right multiplication at {_w(p)}",
                )
        return tally.report()

    @staticmethod
    def _braid_length(kind: FamilyKind, a, b) -> int:
        """m with aba… = bab… (m letters each) for generators a < b"""
        i, j = a[0], b[0]
        if kind == FamilyKind.D and i == 0:
            return 3 if j == 2 else 2
        if i == 0:
            return 4 if j == 1 else 2
        return 3 if j == i + 1 else 2

    def natural_matches_order_l(self, r: int, n: int) -> LawReport:
        tally = _Tally("natural-vs-order-l", {"r": r, "n": n})
        for p in permutation_service.enumerate_family(FamilySpec.colored(r, n)):
            tally.case()
            a = statistics_service.inversions(p, OrderTag.NATURAL)
            b = statistics_service.inversions(p, OrderTag.ORDER_L)
            tally.expect(a == b, lambda: f"{_w(p)}: {a} natural vs {b} order-l inversions")
        return tally.report()

    def flag_congruences(self, r: int, n: int) -> LawReport:
        """fdes ≡ z_1 and fmaj ≡ col (mod r)"""
        tally = _Tally("flag-congruences", {"r": r, "n": n})
        for p in permutation_service.enumerate_family(FamilySpec.colored(r, n)):
            tally.case()
            flag = statistics_service.flag_stats(p)
            first = p.z[0] if n else 0
            tally.expect((flag.fdes - first) % r == 0, lambda: f"fdes {flag.fdes} at {_w(p)}")
            tally.expect((flag.fmaj - flag.col) % r == 0, lambda: f"fmaj {flag.fmaj} at {_w(p)}")
        return tally.report()

    def d_last_sign_invariance(self, n: int) -> LawReport:
        """ddes and dmaj ignore the sign of the last entry"""
        tally = _Tally("d-last-sign", {"n": n})
        for p in permutation_service.enumerate_family(FamilySpec.even_signed(n)):
            if not n:
                break
            tally.case()
            flipped = ColoredPermutation.trusted(2, p.sigma, p.z[:-1] + (1 - p.z[-1],))
            a, b = statistics_service.d_stats(p), statistics_service.d_stats(flipped)
            tally.expect((a.ddes, a.dmaj) == (b.ddes, b.dmaj), lambda: f"{_w(p)} vs {_w(flipped)}")
        return tally.report()

    def tilde_partition(self, n: int) -> LawReport:
        """For H all ± of length 2n+1, the tilde sets partition B_{n+1}"""
        tally = _Tally("tilde-partition", {"n": n})
        h = RestrictionTuple.full(2, 2 * n + 1)
        seen = Counter()
        for tilde in permutation_service.tilde_family(h):
            for p in permutation_service.enumerate_family(FamilySpec.tilde_b(tilde)):
                seen[p] += 1
        whole = set(permutation_service.enumerate_family(FamilySpec.hyperoctahedral(n + 1)))
        for p in sorted(whole):
            tally.case()
            tally.expect(seen[p] == 1, lambda: f"{_w(p)} lies in {seen[p]} tilde sets")
        tally.expect(set(seen) == whole, lambda: "tilde sets leave B_{n+1}")
        return tally.report()

    # Barred permutations

    def barred_counts(self, n: int, max_bars: int) -> LawReport:
        tally = _Tally("barred-counts", {"n": n, "k": max_bars})
        for k in range(max_bars + 1):
            for sign_class in SignClass:
                tally.case()
                counted = barred_service.count_barred(n, k, sign_class)
                closed = barred_service.closed_form(n, k, sign_class)
                tally.expect(counted == closed, lambda: f"k={k} {sign_class.value}: {counted} vs {closed}")
        return tally.report()

    def min_barred_weight(self, n: int) -> LawReport:
        tally = _Tally("min-barred-weight", {"n": n})
        for p in permutation_service.enumerate_family(FamilySpec.hyperoctahedral(n)):
            tally.case()
            b = barred_service.min_barred(p)
            fdes = statistics_service.flag_stats(p).fdes
            tally.expect(barred_service.is_valid(b), lambda: f"{barred_service.format_barred(b)} is not valid")
            tally.expect(b.total_bars == fdes, lambda: f"{_w(p)}: {b.total_bars} bars, fdes {fdes}")
        return tally.report()

    # Identity registry

    def specialization_coherence(self, refined_id: str, params: IdentityParams) -> LawReport:
        """A refined identity with the full restriction, variables merged, reproduces the plain one"""
        plain_id = refined_id.removesuffix("-refined")
        tally = _Tally("specialization-coherence", {"id": refined_id, **params.to_json()})
        refined = identity_registry.verify(refined_id, params)
        plain = identity_registry.verify(plain_id, params)
        for side in ("lhs", "rhs"):
            tally.case()
            a = Poly.from_json(getattr(refined, side))
            b = Poly.from_json(getattr(plain, side))
            if a.arity > b.arity:
                a = a.collapse(b.arity - 1)
            tally.expect(a == b, lambda: f"{side} of {refined_id} does not collapse to {plain_id}")
        return tally.report()

    def substitution_coherence(self, n: int) -> LawReport:
        """A-EM at t=1 is the Gessel-Simion identity on S_2n"""
        tally = _Tally("substitution-coherence", {"n": n})
        em = identity_registry.verify("A-EM", IdentityParams(n=n))
        gs = identity_registry.verify("gessel-simion", IdentityParams(n=2 * n))
        for side in ("lhs", "rhs"):
            tally.case()
            a = Poly.from_json(getattr(em, side)).substitute_one(0)
            b = Poly.from_json(getattr(gs, side))
            tally.expect(a == b, lambda: f"{side}: A-EM at t=1 differs from gessel-simion")
        return tally.report()

    def determinism(self, identity_id: str, params: IdentityParams, jobs: int = 4) -> LawReport:
        """Reports are byte-identical across repeated runs and worker counts"""
        tally = _Tally("determinism", {"id": identity_id, "jobs": jobs, **params.to_json()})
        runs: Iterable[int] = (1, 1, jobs)
        blobs = []
        for j in runs:
            tally.case()
            report = identity_registry.verify(identity_id, params, jobs=j)
            blobs.append(orjson.dumps(report.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS))
        tally.expect(len(set(blobs)) == 1, lambda: f"{identity_id} output depends on the run or worker count")
        return tally.report()


law_checks = LawCheckService()
