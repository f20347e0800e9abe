import logging
from typing import List

from app.models.errors import DomainError
from app.models.permutation import ColoredPermutation, FamilyKind
from app.models.statistics import (
    DescentData,
    DescentPrefix,
    DStats,
    FlagStats,
    OrderTag,
    SignChange,
    StatBundle,
)
from app.services.permutation_service import permutation_service

logger = logging.getLogger(__name__)

_EMPTY = frozenset()


class StatisticsService:
    def order_keys(self, p: ColoredPermutation, order: OrderTag) -> List[int]:
        """Integer rank of each window entry; comparing ranks compares entries"""
        r, n = p.r, p.n
        if order == OrderTag.NATURAL:
            return [-a if c else a for a, c in zip(p.sigma, p.z)]
        if order == OrderTag.ORDER_L:
            # colored letters sit below 1; bigger letter, then bigger color, is smaller
            return [-(a * r + c) if c else a for a, c in zip(p.sigma, p.z)]
        return [(r - c) * (n + 1) + a for a, c in zip(p.sigma, p.z)]

    def inversions(self, p: ColoredPermutation, order: OrderTag = OrderTag.ORDER_L) -> int:
        keys = self.order_keys(p, order)
        n = len(keys)
        return sum(1 for i in range(n) for j in range(i + 1, n) if keys[i] > keys[j])

    def descent_data(
        self,
        p: ColoredPermutation,
        order: OrderTag = OrderTag.NATURAL,
        prefix: DescentPrefix = DescentPrefix.NONE,
    ) -> DescentData:
        keys = self.order_keys(p, order)
        if prefix != DescentPrefix.NONE:
            if order != OrderTag.NATURAL:
                raise DomainError(f"prefix {prefix.value} only applies to the natural order")
            if prefix == DescentPrefix.ZERO:
                keys = [0] + keys
            else:
                if p.n < 2:
                    raise DomainError("the π_0 = -π_2 convention needs n >= 2")
                keys = [-keys[1]] + keys
            offset = 0
        else:
            offset = 1
        des_set = frozenset(i + offset for i in range(len(keys) - 1) if keys[i] > keys[i + 1])
        return DescentData(des_set, len(des_set), sum(des_set))

    def type_b_descents(self, p: ColoredPermutation) -> DescentData:
        return self.descent_data(p, OrderTag.NATURAL, DescentPrefix.ZERO)

    def type_d_descents(self, p: ColoredPermutation) -> DescentData:
        """Des_D with π_0 = -π_2; D_0 and D_1 have no descents"""
        if p.n < 2:
            return DescentData(_EMPTY, 0, 0)
        return self.descent_data(p, OrderTag.NATURAL, DescentPrefix.MINUS_PI2)

    def flag_stats(self, p: ColoredPermutation) -> FlagStats:
        r = p.r
        keys = self.order_keys(p, OrderTag.FLAG)
        des_set = frozenset(i + 1 for i in range(len(keys) - 1) if keys[i] > keys[i + 1])
        des = len(des_set)
        maj = sum(des_set)
        col = sum(p.z)
        neg_set = frozenset(i for i, c in enumerate(p.z, start=1) if c)
        first = p.z[0] if p.z else 0
        return FlagStats(des_set, des, maj, r * des + first, r * maj + col, col, len(neg_set), neg_set)

    def length(self, p: ColoredPermutation, family: FamilyKind = FamilyKind.G) -> int:
        if family in (FamilyKind.G, FamilyKind.SYM, FamilyKind.RESTRICTED_G):
            return self.inversions(p, OrderTag.ORDER_L) + sum(
                a + c - 1 for a, c in zip(p.sigma, p.z) if c
            )
        if p.r != 2:
            raise DomainError(f"{family.value} length needs a signed permutation, got r={p.r}")
        inv = self.inversions(p, OrderTag.NATURAL)
        if family in (FamilyKind.B, FamilyKind.TILDE_B):
            return inv + sum(a for a, c in zip(p.sigma, p.z) if c)
        if family == FamilyKind.D:
            if sum(p.z) % 2:
                raise DomainError("type D length needs an even number of negative letters")
            return inv + sum(a - 1 for a, c in zip(p.sigma, p.z) if c)
        raise DomainError(f"no length function for {family.value}")

    def d_stats(self, p: ColoredPermutation) -> DStats:
        """ddes and dmaj read the word with its last entry made positive"""
        self._require_signed(p)
        if p.n == 0:
            return DStats(0, 0, 0)
        word = ColoredPermutation.trusted(2, p.sigma, p.z[:-1] + (0,))
        flag = self.flag_stats(word)
        sgm = p.z[p.sigma.index(p.n)]
        return DStats(flag.fdes, flag.fmaj, sgm)

    def sign_change(self, p: ColoredPermutation) -> SignChange:
        self._require_signed(p)
        z = p.z
        n = p.n
        delta = tuple(int(z[i] != z[i + 1]) for i in range(n - 1))
        if n:
            delta += (z[-1],)
        return SignChange(delta, sum(delta))

    def stat_bundle(self, p: ColoredPermutation) -> StatBundle:
        """Collect every statistic that applies to p"""
        natural = self.descent_data(p, OrderTag.NATURAL)
        flag = self.flag_stats(p)
        bundle = dict(
            window=permutation_service.format_window(p),
            r=p.r,
            n=p.n,
            inv_natural=self.inversions(p, OrderTag.NATURAL),
            inv_L=self.inversions(p, OrderTag.ORDER_L),
            Des=sorted(natural.des_set),
            des=natural.des,
            maj=natural.maj,
            Des_F=sorted(flag.des_set),
            des_F=flag.des,
            maj_F=flag.maj,
            fdes=flag.fdes,
            fmaj=flag.fmaj,
            col=flag.col,
            neg=flag.neg,
            Neg=sorted(flag.neg_set),
            len_G=self.length(p, FamilyKind.G),
        )
        if p.r == 2:
            type_b = self.type_b_descents(p)
            type_d = self.type_d_descents(p)
            d = self.d_stats(p)
            change = self.sign_change(p)
            bundle.update(
                len_B=self.length(p, FamilyKind.B),
                Des_B=sorted(type_b.des_set),
                des_B=type_b.des,
                maj_B=type_b.maj,
                Des_D=sorted(type_d.des_set),
                des_D=type_d.des,
                maj_D=type_d.maj,
                ddes=d.ddes,
                dmaj=d.dmaj,
                sgm=d.sgm,
                delta=list(change.delta),
                ch=change.ch,
            )
            if flag.neg % 2 == 0:
                bundle["len_D"] = self.length(p, FamilyKind.D)
        return StatBundle(**bundle)

    @staticmethod
    def _require_signed(p: ColoredPermutation):
        if p.r != 2:
            raise DomainError(f"expected a signed permutation (r=2), got r={p.r}")


statistics_service = StatisticsService()
