"""Self-supervised pre-training toolkit for multivariate temporal point
processes: synthetic generators, void-event augmentation, masked-event
pre-training and frozen-representation fine-tuning."""

from ._core import (
    AugmentedSequence,
    Epoch,
    EventSequence,
    FinetunedModel,
    PretrainedModel,
    apply_mask,
    evaluate,
    finetune,
    inject_voids,
    list_models,
    load_augmented_jsonl,
    load_jsonl,
    load_pretrained,
    loglik,
    pretrain,
    registry_json,
    save_augmented_jsonl,
    save_jsonl,
    simulate,
)

__all__ = [
    "AugmentedSequence",
    "Epoch",
    "EventSequence",
    "FinetunedModel",
    "PretrainedModel",
    "apply_mask",
    "evaluate",
    "finetune",
    "inject_voids",
    "list_models",
    "load_augmented_jsonl",
    "load_jsonl",
    "load_pretrained",
    "loglik",
    "pretrain",
    "registry_json",
    "save_augmented_jsonl",
    "save_jsonl",
    "simulate",
]
