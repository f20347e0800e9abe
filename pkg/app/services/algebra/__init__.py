from app.services.algebra.cyclotomic import CyclotomicInt, cyclotomic_polynomial, omega_power
from app.services.algebra.polynomial import Poly, PolyAccumulator, gessel_simion_rhs, product_one_minus
from app.services.algebra.series import TruncatedSeries
