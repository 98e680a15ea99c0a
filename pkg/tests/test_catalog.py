import json
import math
import unittest
from typing import Annotated, TypedDict

from neumann_bessel import Catalog, EvalBudget, default_catalog
from neumann_bessel.bessel import bessel_j
from neumann_bessel.exceptions import DefinitionError, DomainError, UnknownIdentityError
from neumann_bessel.identities import (
    IdentityRecord, build_catalog, i_power, square_ground, triangle_ground, triangle_weight
)
from neumann_bessel.polygon import PlanePoint, circumradius, f_n, fn_weight, polygon_constants
from neumann_bessel.series import ComplexValue

catalog = default_catalog()

class Scalar(TypedDict):
    z: Annotated[float, "min=0; max=1; grid=0,1"]

class Loose(TypedDict):
    z: float

def _constant(value):
    return lambda pt, budget: ComplexValue.of(value)

class TestRegistry(unittest.TestCase):
    def test_listing(self):
        ids = catalog.ids()
        self.assertGreaterEqual(len(catalog), 24)
        self.assertEqual(len(ids), len(set(ids)))
        for identity_id in ("master", "sq-ground", "tri-ground", "fn-general", "parseval-general", "rational-odd"):
            self.assertIn(identity_id, catalog)
        first = catalog.list_identities()[0]
        self.assertEqual(first[0], "master")
        self.assertTrue(all(title and ref for _, title, ref in catalog.list_identities()))

    def test_default_catalog_is_shared_and_frozen(self):
        self.assertIs(default_catalog(), catalog)
        with self.assertRaises(DefinitionError):
            catalog.register(IdentityRecord("extra", "t", "r", Scalar, _constant(0.0), _constant(0.0)))

    def test_duplicate_and_bad_domains(self):
        local = Catalog()
        local.register(IdentityRecord("one", "t", "r", Scalar, _constant(1.0), _constant(1.0)))
        with self.assertRaises(DefinitionError):
            local.register(IdentityRecord("one", "t", "r", Scalar, _constant(1.0), _constant(1.0)))
        with self.assertRaises(DefinitionError):
            local.register(IdentityRecord("two", "t", "r", Loose, _constant(1.0), _constant(1.0)))
        self.assertEqual(local.ids(), ["one"])

    def test_unknown_identity(self):
        with self.assertRaises(UnknownIdentityError) as result:
            catalog.get("nope")
        self.assertEqual(str(result.exception), "Unknown identity 'nope'")
        self.assertIsInstance(result.exception, KeyError)
        with self.assertRaises(UnknownIdentityError):
            catalog.eval_sides("nope", {})

    def test_dynamic_api(self):
        lhs, rhs = catalog.sq_ground({"r": 1.0, "theta": 0.3})
        self.assertLessEqual(lhs.distance(rhs), 1e-10)
        self.assertIs(catalog.sq_ground, catalog.sq_ground)
        with self.assertRaises(AttributeError):
            catalog.no_such_identity
        with self.assertRaises(AttributeError):
            catalog._hidden

    def test_document(self):
        document = catalog.document()
        self.assertEqual([entry["id"] for entry in document], catalog.ids())
        master = document[0]
        self.assertEqual(set(master), {"id", "title", "paper_ref", "params"})
        self.assertEqual([p["name"] for p in master["params"]], ["n", "p", "z", "y"])
        y = master["params"][3]
        self.assertEqual(y["kind"], "angle")
        self.assertAlmostEqual(y["min"], -2 * math.pi)
        self.assertEqual(json.loads(catalog.schema()), json.loads(json.dumps(document)))

    def test_grid_respects_conditions(self):
        points = catalog.grid("master")
        self.assertTrue(points)
        self.assertTrue(all(pt["p"] <= pt["n"] for pt in points))
        self.assertEqual(list(points[0]), ["n", "p", "z", "y"])
        half = catalog.grid("product-t-half")
        self.assertTrue(any(pt["p"] + pt["q"] == 0 for pt in half))
        self.assertEqual(max(pt["z"] for pt in half), 20.0)
        self.assertEqual(len(catalog.grid("master", {"n": [3], "p": [1], "z": [5.0], "y": [0.7]})), 1)

class TestDomains(unittest.TestCase):
    def test_out_of_range(self):
        with self.assertRaises(DomainError) as result:
            catalog.eval_sides("master", {"n": 0, "p": 0, "z": 1.0, "y": 0.0})
        self.assertEqual(result.exception.errors[0]["path"], "n")
        with self.assertRaises(DomainError):
            catalog.eval_sides("master", {"n": 2, "p": 0, "z": 31.0, "y": 0.0})

    def test_missing_and_extra_parameters(self):
        with self.assertRaises(DomainError):
            catalog.eval_sides("cos4k", {"z": 1.0})
        with self.assertRaises(DomainError):
            catalog.eval_sides("cos4k", {"z": 1.0, "alpha": 0.1, "beta": 0.0})

    def test_cross_parameter_conditions(self):
        with self.assertRaises(DomainError):
            catalog.eval_sides("master", {"n": 3, "p": 5, "z": 1.0, "y": 0.0})

    def test_unknown_reading(self):
        with self.assertRaises(DomainError):
            catalog.eval_sides("tri-ground", {"r": 0.5, "theta": 0.0}, reading="mirror")

class TestIdentities(unittest.TestCase):
    def assertHolds(self, identity_id, point, tolerance=1e-10):
        residual = catalog.residual(identity_id, point)
        self.assertLessEqual(residual, tolerance, f"{identity_id} at {point}: {residual}")

    def test_jacobi_even_at_right_angle(self):
        lhs, rhs = catalog.eval_sides("jacobi-even", {"z": 4.2, "alpha": math.pi / 2})
        self.assertAlmostEqual(lhs.re, 1.0, delta=1e-10)
        self.assertAlmostEqual(rhs.re, 1.0, delta=1e-15)

    def test_square_ground_at_origin(self):
        lhs, rhs = catalog.eval_sides("sq-ground", {"r": 0.0, "theta": 0.0})
        self.assertEqual((lhs.re, lhs.im), (1.0, 0.0))
        self.assertEqual(rhs.re, 1.0)

    def test_square_ground_vanishes_on_vertex_square(self):
        R = circumradius(4)
        for t in (0.0, 0.2, 0.5, 0.9):
            self.assertAlmostEqual(float(square_ground(R * (1 - t), R * t)), 0.0, delta=1e-12)

    def test_triangle_ground_is_scaled_f3(self):
        scale = polygon_constants(3).lambda_n
        for x, y in ((0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)):
            self.assertAlmostEqual(float(triangle_ground(x, y)), f_n(3, PlanePoint(scale * x, scale * y)), delta=1e-12)

    def test_selected_points(self):
        cases = [
            ("master", {"n": 3, "p": 1, "z": 5.0, "y": 0.7}),
            ("tri-ground", {"r": 1.2, "theta": 0.4}),
            ("fn-general", {"n": 5, "r": 6.0, "theta": 1.0}),
            ("f6-kagome", {"x": 3.0, "y": -2.0}),
            ("ext-alpha", {"n": 3, "z": 7.0, "alpha": 0.3}),
            ("jacobi-odd", {"z": 11.0, "alpha": 0.8}),
            ("jacobi-even-shift", {"z": 3.0, "alpha": 2.0}),
            ("jacobi-odd-shift", {"z": 3.0, "alpha": 2.0}),
            ("fold-2n", {"n": 3, "z": 5.0, "alpha": 0.6}),
            ("deriv-2k", {"z": 6.0}),
            ("cos4k", {"z": 0.0, "alpha": 1.0}),
            ("deriv-4k", {"z": 6.0, "alpha": 0.5}),
            ("k2-4k", {"z": 15.0}),
            ("odd-fold-even", {"n": 2, "z": 9.0, "alpha": 0.2}),
            ("odd-fold-odd", {"n": 2, "z": 9.0, "alpha": 0.2}),
            ("hexagon-triangle", {"z": 4.0, "alpha": 0.9}),
            ("decagon", {"z": 4.0, "alpha": 0.9}),
            ("decagon-xy", {"x": 2.5, "y": -1.5}),
            ("beta-phase", {"n": 4, "z": 6.0, "y": 0.5, "beta": 2.0}),
            ("parseval-general", {"n": 5, "p": 2, "x": 9.0}),
            ("parseval-even", {"n": 3, "x": 7.0}),
            ("parseval-odd", {"n": 3, "x": 7.0}),
            ("product-master", {"n": 3, "p": 1, "q": 3, "z": 4.0, "zp": 2.0, "t": 0.3}),
            ("product-samez", {"n": 3, "p": 2, "q": 1, "z": 7.0, "t": 0.4}),
            ("product-n2", {"p": 1, "q": 3, "z": 2.5, "t": 0.3}),
            ("product-t-quarter", {"p": 2, "q": 1, "z": 6.0}),
            ("product-t-half", {"p": 1, "q": 0, "z": 6.0}),
            ("product-zzp", {"n": 4, "z": 4.0, "zp": 7.0}),
            ("product-4k-new", {"x": 3.0, "y": 5.0}),
            ("rational-even", {"a": 1.5, "z": 2.0}),
            ("rational-odd", {"a": 0.5, "z": 8.0}),
        ]
        for identity_id, point in cases:
            with self.subTest(identity=identity_id):
                self.assertHolds(identity_id, point)

    def test_half_turn_product_at_non_positive_total_order(self):
        for p, q, z in ((0, 0, 0.0), (0, 0, 6.0), (1, -1, 3.0), (2, -2, 9.0), (-1, -2, 4.0), (-4, 1, 20.0)):
            self.assertHolds("product-t-half", {"p": p, "q": q, "z": z})
        _, rhs = catalog.eval_sides("product-t-half", {"p": 0, "q": 0, "z": 0.0})
        self.assertEqual(rhs.re, 1.0)
        _, rhs = catalog.eval_sides("product-t-half", {"p": 1, "q": -1, "z": 0.0})
        self.assertEqual(rhs.re, 0.0)

    def test_products_at_wide_arguments(self):
        cases = [
            ("product-master", {"n": 2, "p": 1, "q": 3, "z": 20.0, "zp": 20.0, "t": 0.3}),
            ("product-master", {"n": 1, "p": 2, "q": 1, "z": 0.0, "zp": 7.0, "t": 0.0}),
            ("product-master", {"n": 1, "p": 1, "q": 2, "z": 7.0, "zp": 0.0, "t": 0.3}),
            ("product-samez", {"n": 4, "p": 2, "q": 3, "z": 20.0, "t": 1.2}),
            ("product-n2", {"p": 0, "q": 1, "z": 20.0, "t": 0.5}),
            ("product-zzp", {"n": 2, "z": 20.0, "zp": 20.0}),
        ]
        for identity_id, point in cases:
            with self.subTest(identity=identity_id, point=point):
                self.assertHolds(identity_id, point)

    def test_rational_series_at_wide_arguments(self):
        for identity_id in ("rational-even", "rational-odd"):
            for a, z in ((0.1, 20.0), (0.5, 20.0), (2.0, 15.0), (10.0, 20.0)):
                with self.subTest(identity=identity_id, a=a, z=z):
                    self.assertHolds(identity_id, {"a": a, "z": z})

    def test_graf_degeneration(self):
        for p, z, t in ((2, 3.0, 0.4), (-3, 7.5, 1.1), (0, 12.0, 2.0)):
            self.assertHolds("graf-n1", {"p": p, "z": z, "t": t})
        lhs, rhs = catalog.eval_sides("graf-n1", {"p": 1, "z": 2.0, "t": 0.0})
        self.assertAlmostEqual(rhs.re, bessel_j(1, 4.0), delta=1e-15)

    def test_variant_readings(self):
        point = {"n": 3, "z": 6.0, "zp": 2.0}
        integral = catalog.eval_sides("product-zzp", point)[1]
        finite = catalog.eval_sides("product-zzp", point, reading="finite")[1]
        self.assertLessEqual(integral.distance(finite), 1e-11)
        _, plane = catalog.eval_sides("hexagon-triangle", {"z": 2.0, "alpha": 0.4}, reading="plane")
        _, closed = catalog.eval_sides("hexagon-triangle", {"z": 2.0, "alpha": 0.4})
        self.assertAlmostEqual(plane.re, closed.re, delta=1e-14)

    def test_triangle_reading_is_certified(self):
        self.assertEqual(catalog.certified_variant("tri-ground"), "balanced")
        worst = catalog.reading_residuals("tri-ground")
        self.assertGreater(worst["literal"], 1e-6)

    def test_fold_readings(self):
        self.assertEqual(catalog.certified_variant("fold-2n"), "halved")

    def test_coefficient_equivalence(self):
        for k in range(1, 101):
            self.assertLessEqual(abs(triangle_weight(k) - fn_weight(3, k)), 1e-15)

    def test_exact_phases(self):
        self.assertEqual([i_power(m) for m in range(-2, 4)], [-1.0, -1j, 1.0, 1j, -1.0, -1j])

    def test_tighter_budget(self):
        budget = EvalBudget(eps=1e-14)
        lhs, rhs = catalog.eval_sides("master", {"n": 2, "p": 1, "z": 20.0, "y": 1.0}, budget)
        self.assertLessEqual(lhs.tail, 1e-14)
        self.assertLessEqual(lhs.distance(rhs), 1e-12)

    def test_catalog_order_is_stable(self):
        self.assertEqual([r.id for r in build_catalog()], catalog.ids())

if __name__ == "__main__":
    unittest.main()
