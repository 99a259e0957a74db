"""CART-style decision tree over (temperature, humidity) with Gini splits.

Split candidates are the midpoints between consecutive sorted distinct
values of each feature. The trainer is fully deterministic: equal-impurity
candidates resolve to the lower feature index, then the lower threshold,
and tied leaf labels resolve to UNSAFE (the fail-safe side). A node may be
split even when the best candidate leaves the weighted impurity unchanged,
as long as the node itself is impure; the XOR layout needs exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import InsufficientDataError, InvalidParameterError
from ..salubrity import Label
from .data import Sample2D


@dataclass(frozen=True)
class Leaf:
    label: Label
    sample_count: int


@dataclass(frozen=True)
class Split:
    feature_index: int  # 0 = temperature, 1 = humidity
    threshold: float
    left: "TreeNode"  # feature value <= threshold
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


def gini_impurity(labels: list[Label]) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    safe = sum(1 for lb in labels if lb is Label.SAFE)
    p = safe / n
    return 1.0 - (p * p + (1.0 - p) * (1.0 - p))


def _majority_label(labels: list[Label]) -> Label:
    safe = sum(1 for lb in labels if lb is Label.SAFE)
    unsafe = len(labels) - safe
    return Label.SAFE if safe > unsafe else Label.UNSAFE


def _feature(sample: Sample2D, index: int) -> float:
    return sample.x if index == 0 else sample.y


def _best_split(samples: list[Sample2D], min_leaf: int) -> tuple[int, float] | None:
    best: tuple[float, int, float] | None = None  # (weighted gini, feature, threshold)
    n = len(samples)
    for feature_index in (0, 1):
        values = sorted({_feature(s, feature_index) for s in samples})
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = [s.label for s in samples if _feature(s, feature_index) <= threshold]
            if len(left) < min_leaf or n - len(left) < min_leaf:
                continue
            right = [s.label for s in samples if _feature(s, feature_index) > threshold]
            weighted = (len(left) * gini_impurity(left) + len(right) * gini_impurity(right)) / n
            # strict < keeps the first (lowest feature, lowest threshold) of any tie
            if best is None or weighted < best[0]:
                best = (weighted, feature_index, threshold)
    if best is None:
        return None
    return best[1], best[2]


def _build(samples: list[Sample2D], depth: int, max_depth: int, min_leaf: int) -> TreeNode:
    labels = [s.label for s in samples]
    if depth >= max_depth or gini_impurity(labels) == 0.0:
        return Leaf(_majority_label(labels), len(samples))
    found = _best_split(samples, min_leaf)
    if found is None:
        return Leaf(_majority_label(labels), len(samples))
    feature_index, threshold = found
    left = [s for s in samples if _feature(s, feature_index) <= threshold]
    right = [s for s in samples if _feature(s, feature_index) > threshold]
    return Split(
        feature_index=feature_index,
        threshold=threshold,
        left=_build(left, depth + 1, max_depth, min_leaf),
        right=_build(right, depth + 1, max_depth, min_leaf),
    )


def fit_decision_tree(samples: list[Sample2D], max_depth: int = 4, min_leaf: int = 1) -> TreeNode:
    if not samples:
        raise InsufficientDataError("cannot fit a tree on an empty sample list")
    if any(s.label is None for s in samples):
        raise InvalidParameterError("every sample must carry a label")
    if max_depth < 1:
        raise InvalidParameterError(f"max_depth must be >= 1, got {max_depth}")
    if min_leaf < 1:
        raise InvalidParameterError(f"min_leaf must be >= 1, got {min_leaf}")
    return _build(samples, 0, max_depth, min_leaf)


def predict_tree(node: TreeNode, sample: Sample2D) -> Label:
    while isinstance(node, Split):
        node = node.left if _feature(sample, node.feature_index) <= node.threshold else node.right
    return node.label


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def tree_to_json_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": {"label": node.label.value, "sample_count": node.sample_count}}
    return {
        "split": {
            "feature_index": node.feature_index,
            "threshold": node.threshold,
            "left": tree_to_json_dict(node.left),
            "right": tree_to_json_dict(node.right),
        }
    }


def tree_from_json_dict(obj: dict) -> TreeNode:
    if "leaf" in obj:
        leaf = obj["leaf"]
        return Leaf(Label(leaf["label"]), int(leaf["sample_count"]))
    split = obj["split"]
    return Split(
        feature_index=int(split["feature_index"]),
        threshold=float(split["threshold"]),
        left=tree_from_json_dict(split["left"]),
        right=tree_from_json_dict(split["right"]),
    )
