"""Unit tests for the orthoscheme core: faces, volumes, H-description and radii"""

import math
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase

from orthoscheme.exceptions import InvalidDimension, InvalidFaceIndex, NumericalError
from orthoscheme.geometry.orthoscheme import (
    FaceIndex,
    Halfspace,
    Orthoscheme,
    all_faces,
    circumradius,
    enumerate_faces,
    enumerate_vertices,
    face_volume,
    facet_halfspaces,
    inradius,
    inradius_from_volumes,
    validate_dimension,
    vertices,
)


class TestValidateDimension(SimpleTestCase):
    """Test cases for validate_dimension"""

    def test_accepts_positive_integers(self):
        """Test that positive ints and numpy ints pass through as int"""
        self.assertEqual(validate_dimension(1), 1)
        self.assertEqual(validate_dimension(np.int64(7)), 7)
        self.assertIsInstance(validate_dimension(np.int64(7)), int)

    def test_rejects_invalid_dimensions(self):
        """Test that zero, negatives, bools and floats are rejected"""
        for value in (0, -3, True, 2.0, "3"):
            with self.subTest(value=value), self.assertRaises(InvalidDimension):
                validate_dimension(value)


class TestFaceIndex(SimpleTestCase):
    """Test cases for FaceIndex"""

    def test_properties(self):
        """Test dimension, gaps, span and gap product of J = {0, 2, 4}"""
        face = FaceIndex.of(0, 2, 4)

        self.assertEqual(face.k, 2)
        self.assertEqual(face.gaps, (2, 2))
        self.assertEqual(face.first, 0)
        self.assertEqual(face.last, 4)
        self.assertEqual(face.span, 4)
        self.assertEqual(face.gap_product, 4)

    def test_vertex_has_no_gaps(self):
        """Test that a vertex has empty gaps and gap product 1"""
        vertex = FaceIndex.of(3)

        self.assertEqual(vertex.k, 0)
        self.assertEqual(vertex.gaps, ())
        self.assertEqual(vertex.gap_product, 1)
        self.assertEqual(vertex.span, 0)

    def test_string_form_and_parse(self):
        """Test the comma-joined report form"""
        face = FaceIndex.of(0, 2, 4)

        self.assertEqual(str(face), "0,2,4")
        self.assertEqual(FaceIndex.parse("0,2,4"), face)

    def test_invalid_indices(self):
        """Test that empty, negative and non-increasing index sets are rejected"""
        for indices in ((), (-1, 2), (2, 2), (3, 1)):
            with self.subTest(indices=indices), self.assertRaises(InvalidFaceIndex):
                FaceIndex(indices)

    def test_parse_rejects_garbage(self):
        """Test that unparsable text raises InvalidFaceIndex"""
        with self.assertRaises(InvalidFaceIndex):
            FaceIndex.parse("0,a")

    def test_validate_for_dimension(self):
        """Test that indices above n are rejected for that orthoscheme"""
        self.assertEqual(FaceIndex.of(0, 3).validate_for(3), FaceIndex.of(0, 3))
        with self.assertRaises(InvalidFaceIndex):
            FaceIndex.of(0, 4).validate_for(3)

    def test_lexicographic_order(self):
        """Test that faces sort lexicographically on their indices"""
        faces = [FaceIndex.of(1, 2), FaceIndex.of(0, 3), FaceIndex.of(0, 1)]
        self.assertEqual(sorted(faces), [FaceIndex.of(0, 1), FaceIndex.of(0, 3), FaceIndex.of(1, 2)])


class TestVerticesAndFaces(SimpleTestCase):
    """Test cases for vertices, face enumeration and face volumes"""

    def test_vertices_of_n3(self):
        """Test that row i holds i leading ones"""
        expected = np.array(
            [
                [0, 0, 0],
                [1, 0, 0],
                [1, 1, 0],
                [1, 1, 1],
            ],
            dtype=float,
        )
        np.testing.assert_array_equal(vertices(3), expected)

    def test_face_counts(self):
        """Test that there are C(n+1, k+1) k-faces"""
        for n in range(1, 7):
            for k in range(n + 1):
                with self.subTest(n=n, k=k):
                    self.assertEqual(len(list(enumerate_faces(n, k))), math.comb(n + 1, k + 1))

    def test_edges_in_lexicographic_order(self):
        """Test the edge order of the 3-dimensional orthoscheme"""
        edges = [str(face) for face in enumerate_faces(3, 1)]
        self.assertEqual(edges, ["0,1", "0,2", "0,3", "1,2", "1,3", "2,3"])

    def test_enumerate_faces_rejects_bad_k(self):
        """Test that k outside [0, n] raises"""
        for k in (-1, 4):
            with self.subTest(k=k), self.assertRaises(InvalidDimension):
                list(enumerate_faces(3, k))

    def test_all_faces_grouped_by_dimension(self):
        """Test that all_faces lists vertices first and the full face last"""
        faces = all_faces(3)

        self.assertEqual(len(faces), 2**4 - 1)
        self.assertEqual(faces[0], FaceIndex.of(0))
        self.assertEqual(faces[-1], FaceIndex.of(0, 1, 2, 3))
        self.assertEqual([face.k for face in faces], sorted(face.k for face in faces))

    def test_face_volumes(self):
        """Test sqrt(prod gaps) / k! on known faces"""
        cases = [
            (3, FaceIndex.of(1), 1.0),
            (3, FaceIndex.of(0, 1), 1.0),
            (3, FaceIndex.of(0, 3), math.sqrt(3)),
            (3, FaceIndex.of(0, 1, 3), math.sqrt(2) / 2),
            (3, FaceIndex.of(0, 1, 2, 3), 1 / 6),
            (4, FaceIndex.of(0, 2, 4), 2.0),
        ]
        for n, face, expected in cases:
            with self.subTest(n=n, face=str(face)):
                self.assertAlmostEqual(face_volume(n, face), expected, places=15)

    def test_face_volume_matches_vertex_distance(self):
        """Test that an edge's volume is the Euclidean distance of its endpoints"""
        points = vertices(5)
        for face in enumerate_faces(5, 1):
            with self.subTest(face=str(face)):
                distance = float(np.linalg.norm(points[face.last] - points[face.first]))
                self.assertAlmostEqual(face_volume(5, face), distance, places=14)

    def test_face_volume_invariant_under_gap_reversal(self):
        """Test that reversing the gap sequence leaves the face volume unchanged"""
        n = 7
        for face in all_faces(n):
            mirrored = FaceIndex.of(*sorted(n - i for i in face.indices))
            with self.subTest(face=str(face)):
                self.assertEqual(mirrored.gaps, face.gaps[::-1])
                self.assertAlmostEqual(face_volume(n, mirrored), face_volume(n, face), places=14)

    def test_face_volume_rejects_foreign_face(self):
        """Test that a face of a larger orthoscheme is rejected"""
        with self.assertRaises(InvalidFaceIndex):
            face_volume(2, FaceIndex.of(0, 3))


class TestHalfspaces(SimpleTestCase):
    """Test cases for the H-description"""

    def test_every_vertex_satisfies_every_halfspace(self):
        """Test that all vertices lie in all halfspaces"""
        for n in range(1, 6):
            points = vertices(n)
            for halfspace in facet_halfspaces(n):
                for point in points:
                    with self.subTest(n=n, halfspace=halfspace.normal):
                        self.assertGreaterEqual(halfspace.slack(point), -1e-15)

    def test_halfspace_j_misses_only_vertex_j(self):
        """Test that facet j is tight on every vertex except P_j"""
        n = 4
        points = vertices(n)
        for j, halfspace in enumerate(facet_halfspaces(n)):
            slacks = [halfspace.slack(point) for point in points]
            with self.subTest(j=j):
                self.assertGreater(slacks[j], 0)
                self.assertTrue(all(abs(s) < 1e-15 for i, s in enumerate(slacks) if i != j))

    def test_zero_normal_rejected(self):
        """Test that a halfspace needs a nonzero normal"""
        with self.assertRaises(NumericalError):
            Halfspace(normal=(0.0, 0.0), offset=1.0)

    def test_vertex_enumeration_recovers_vertices(self):
        """Test that solving the H-description gives back the V-description"""
        for n in range(1, 6):
            with self.subTest(n=n):
                recovered = enumerate_vertices(facet_halfspaces(n))
                expected = np.array(sorted(map(tuple, vertices(n))))
                np.testing.assert_allclose(recovered, expected, atol=1e-12)


class TestRadii(SimpleTestCase):
    """Test cases for circumradius and inradius"""

    def test_circumradius(self):
        """Test R = sqrt(n) / 2"""
        for n in range(1, 22):
            with self.subTest(n=n):
                self.assertAlmostEqual(circumradius(n), math.sqrt(n) / 2, places=12)

    def test_inradius_small_dimensions(self):
        """Test r for the segment and the right isosceles triangle"""
        self.assertAlmostEqual(inradius(1), 0.5, places=12)
        self.assertAlmostEqual(inradius(2), 1 / (2 + math.sqrt(2)), places=12)

    def test_inradius_agrees_with_volume_identity(self):
        """Test that the LP optimum agrees with n Vol / surface"""
        for n in range(1, 22):
            with self.subTest(n=n):
                self.assertTrue(math.isclose(inradius(n), inradius_from_volumes(n), rel_tol=1e-10))

    def test_inradius_below_circumradius(self):
        """Test r < R for n >= 2"""
        for n in (*range(2, 12), 16, 24, 32, 48):
            with self.subTest(n=n):
                self.assertLess(inradius(n), circumradius(n))

    @patch("orthoscheme.geometry.orthoscheme.linprog")
    def test_inradius_reports_solver_failure(self, mock_linprog):
        """Test that a failed LP raises NumericalError"""
        mock_linprog.return_value.status = 2
        mock_linprog.return_value.message = "infeasible"

        with self.assertRaises(NumericalError):
            inradius(3)


class TestOrthoschemeWrapper(SimpleTestCase):
    """Test cases for the Orthoscheme convenience class"""

    def test_wrapper_delegates(self):
        """Test that the wrapper exposes the module functions for one n"""
        body = Orthoscheme(3)

        self.assertEqual(body.vertices.shape, (4, 3))
        self.assertEqual(len(body.halfspaces), 4)
        self.assertEqual(len(list(body.faces(1))), 6)
        self.assertAlmostEqual(body.volume, 1 / 6)
        self.assertAlmostEqual(body.face_volume(FaceIndex.of(0, 3)), math.sqrt(3))
        self.assertAlmostEqual(body.circumradius, math.sqrt(3) / 2)
        self.assertAlmostEqual(body.inradius, inradius_from_volumes(3))

    def test_wrapper_validates_dimension(self):
        """Test that the wrapper rejects n < 1"""
        with self.assertRaises(InvalidDimension):
            Orthoscheme(0)
