"""Approximate image matching under affine transformations."""

from ._subpix import (
    AffineMap2D,
    BinaryImage2D,
    BinaryImage3D,
    GrayImage2D,
    IntensityMap,
    cover_size,
    distance,
    estimate_distance,
    exhaustive_min_distance,
    gen_d1,
    gen_d2,
    general_sample_count,
    match_general,
    match_grayscale,
    match_smooth,
    match_volume,
    median_repetitions,
    min_translation_distance,
    read_pbm,
    read_pgm,
    read_vox3,
    reduce_to_3d,
    reduction_consistency,
    samples_per_estimate,
    write_pbm,
    write_pgm,
    write_vox3,
)

__all__ = [
    "AffineMap2D",
    "BinaryImage2D",
    "BinaryImage3D",
    "GrayImage2D",
    "IntensityMap",
    "cover_size",
    "distance",
    "estimate_distance",
    "exhaustive_min_distance",
    "gen_d1",
    "gen_d2",
    "general_sample_count",
    "match_general",
    "match_grayscale",
    "match_smooth",
    "match_volume",
    "median_repetitions",
    "min_translation_distance",
    "read_pbm",
    "read_pgm",
    "read_vox3",
    "reduce_to_3d",
    "reduction_consistency",
    "samples_per_estimate",
    "write_pbm",
    "write_pgm",
    "write_vox3",
]
