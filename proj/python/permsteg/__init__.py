"""Histogram-preserving steganography by permutation coding."""

from ._permsteg import (
    CapacityError,
    Error,
    Histogram,
    InfeasibleError,
    analyze,
    binary_host,
    bits_to_bytes,
    bytes_to_bits,
    capacity,
    compute_histogram,
    embed,
    embedding_capacity,
    extract,
    gaussian_host,
    log2_multinomial,
    parse_kappa,
    perm_decode,
    perm_encode,
    run_experiment,
    select_partitioning,
    uniform_support_sequence,
)

__all__ = [
    "CapacityError",
    "Error",
    "Histogram",
    "InfeasibleError",
    "analyze",
    "binary_host",
    "bits_to_bytes",
    "bytes_to_bits",
    "capacity",
    "compute_histogram",
    "embed",
    "embedding_capacity",
    "extract",
    "gaussian_host",
    "log2_multinomial",
    "parse_kappa",
    "perm_decode",
    "perm_encode",
    "run_experiment",
    "select_partitioning",
    "uniform_support_sequence",
]
