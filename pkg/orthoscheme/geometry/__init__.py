from .brownian import bm_intrinsic_volume, limit_rows, mk_sequence, mk_values, omega
from .cones import ConeSpec, euler_solid_angle, exact_cone_measure, mcmullen_assemble, normal_cone_rays
from .exact import IntrinsicVolumes, Method, Provenance, intrinsic_volume, intrinsic_volumes_all
from .orthoscheme import FaceIndex, Orthoscheme, circumradius, face_volume, inradius
from .sampling import FaceSample, cone_gauss_mc, mc_gauss_measures, mc_intrinsic_volumes, sample_faces
from .sangwine_yager import SYReport, poly_roots, sy_check

__all__ = [
    "ConeSpec",
    "FaceIndex",
    "FaceSample",
    "IntrinsicVolumes",
    "Method",
    "Orthoscheme",
    "Provenance",
    "SYReport",
    "bm_intrinsic_volume",
    "circumradius",
    "cone_gauss_mc",
    "euler_solid_angle",
    "exact_cone_measure",
    "face_volume",
    "inradius",
    "intrinsic_volume",
    "intrinsic_volumes_all",
    "limit_rows",
    "mc_gauss_measures",
    "mc_intrinsic_volumes",
    "mcmullen_assemble",
    "mk_sequence",
    "mk_values",
    "normal_cone_rays",
    "omega",
    "poly_roots",
    "sample_faces",
    "sy_check",
]
