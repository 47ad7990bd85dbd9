from collections.abc import Sequence

from leaf.utils.error_handler import OracleError


def f1_bruteforce(a: Sequence[bool | int], b: Sequence[bool | int]) -> float:
    """
    F1 of b against reference a from an explicitly tabulated confusion matrix.

    No positives on either side and no disagreement counts as perfect (1.0).
    """
    if len(a) != len(b):
        raise OracleError(f"length mismatch: {len(a)} vs {len(b)}")
    tp = fp = fn = 0
    for reference, predicted in zip(a, b):
        if reference and predicted:
            tp += 1
        elif predicted:
            fp += 1
        elif reference:
            fn += 1
    if tp == fp == fn == 0:
        return 1.0
    return 2 * tp / (2 * tp + fp + fn)
