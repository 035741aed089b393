"""The looklab command line: train/eval/infer per component, batch runs,
and the two HTTP services."""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import imageio
from .manifests import read_jsonl


@click.group()
def main():
    """Shop-the-look pipeline tools."""


# -- keypoints ---------------------------------------------------------------


@main.group()
def keypoints():
    """Human keypoint model."""


@keypoints.command("train")
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--epochs", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
def keypoints_train(manifest, out, epochs, seed):
    from .keypoints import (TINY_KEYPOINT_CONFIG, load_keypoint_dataset,
                            save_keypoint_model, train_keypoint_model)

    dataset = load_keypoint_dataset(manifest)
    model = train_keypoint_model(dataset, TINY_KEYPOINT_CONFIG, epochs=epochs, seed=seed)
    save_keypoint_model(model, out)
    click.echo(f"trained on {len(dataset)} images -> {out}")


@keypoints.command("infer")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--image", "image_path", required=True, type=click.Path(exists=True))
@click.option("--conf-threshold", default=0.5, show_default=True,
              help="threshold used for the reported full-shot flag")
def keypoints_infer(model_path, image_path, conf_threshold):
    from .keypoints import is_full_shot, load_keypoint_model

    model = load_keypoint_model(model_path)
    image = imageio.load_image(image_path)
    kps = model.infer(image)
    payload = {
        "image": image_path,
        "keypoints": {
            name: {"x": kp.x, "y": kp.y, "confidence": kp.confidence}
            for name, kp in kps.points.items()
        },
        "full_shot": is_full_shot(kps, model.schema, conf_threshold),
    }
    click.echo(json.dumps(payload, sort_keys=True))


# -- pose ----------------------------------------------------------------------


@main.group()
def pose():
    """Pose classifier."""


@pose.command("train")
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--epochs", default=25, show_default=True)
@click.option("--seed", default=0, show_default=True)
def pose_train(manifest, out, epochs, seed):
    from .pose import TINY_POSE_CONFIG, load_pose_dataset, save_pose_model, train_pose_model

    dataset = load_pose_dataset(manifest)
    model = train_pose_model(dataset, TINY_POSE_CONFIG, epochs=epochs, seed=seed)
    save_pose_model(model, out)
    click.echo(f"trained on {len(dataset)} images -> {out}")


@pose.command("eval")
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out-dir", required=True, type=click.Path())
def pose_eval(manifest, model_path, out_dir):
    import os

    from .pose import evaluate_pose_model, load_pose_dataset, load_pose_model

    os.makedirs(out_dir, exist_ok=True)
    model = load_pose_model(model_path)
    dataset = load_pose_dataset(manifest)
    cm, pr = evaluate_pose_model(model, dataset)
    cm_path = os.path.join(out_dir, "confusion_matrix.csv")
    with open(cm_path, "w", encoding="utf-8") as fh:
        fh.write(cm.to_csv())
    pr_path = os.path.join(out_dir, "precision_recall.json")
    with open(pr_path, "w", encoding="utf-8") as fh:
        json.dump(
            {label.value: {"precision": p, "recall": r} for label, p, r in pr},
            fh, indent=2, sort_keys=True,
        )
        fh.write("\n")
    click.echo(f"wrote {cm_path} and {pr_path}")


@pose.command("infer")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--image", "image_path", required=True, type=click.Path(exists=True))
def pose_infer(model_path, image_path):
    from .pose import classify_pose, load_pose_model

    model = load_pose_model(model_path)
    label, conf = classify_pose(imageio.load_image(image_path), model)
    click.echo(json.dumps({"pose": label.value, "confidence": conf}, sort_keys=True))


# -- detect ----------------------------------------------------------------------


@main.group()
def detect():
    """Fashion article detection."""


@detect.command("eval")
@click.option("--gt", "gt_path", required=True, type=click.Path(exists=True))
@click.option("--dets", "dets_path", required=True, type=click.Path(exists=True))
@click.option("--iou", default=0.5, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="write the per-class AP table CSV here (default: stdout)")
def detect_eval(gt_path, dets_path, iou, out):
    from .detect import evaluate_detections, load_detections_file, load_gt_manifest

    gts = load_gt_manifest(gt_path)
    dets = load_detections_file(dets_path)
    result = evaluate_detections(dets, gts, iou_thresh=iou)
    csv = result.to_csv()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(csv)
        click.echo(f"mAP {result.map_score:.4f} -> {out}")
    else:
        click.echo(csv, nl=False)


# -- embed ----------------------------------------------------------------------


@main.group()
def embed():
    """Triplet embedding model."""


@embed.command("train")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--category", required=True, help="broad article category this model serves")
@click.option("--out", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="single JSON file with train+loss hyperparameters")
@click.option("--epochs", default=30, show_default=True)
@click.option("--margin", default=1.0, show_default=True)
@click.option("--mining/--no-mining", default=True, show_default=True)
@click.option("--seed", default=0, show_default=True)
def embed_train(pairs_path, category, out, config_path, epochs, margin, mining, seed):
    from dataclasses import replace

    from .embed import (TINY_TRAIN_CONFIG, TripletLossConfig, build_triplets,
                        load_pairs_manifest, load_train_config,
                        save_embedding_model, train_embedding_model)

    pairs = load_pairs_manifest(pairs_path)
    triplets = build_triplets(pairs, seed=seed)
    if config_path:
        cfg, loss_cfg = load_train_config(config_path)
    else:
        cfg = replace(TINY_TRAIN_CONFIG, epochs=epochs, seed=seed, semi_hard_mining=mining)
        loss_cfg = TripletLossConfig(margin=margin)
    model = train_embedding_model(triplets, cfg, loss_cfg)
    save_embedding_model(model, out)
    click.echo(f"{category}: trained on {len(triplets)} triplets -> {out} "
               f"(final loss {model.loss_history[-1]:.6f})")


@embed.command("infer")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--image", "image_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(),
              help="binary vector record; a .json sidecar is written next to it")
def embed_infer(model_path, image_path, out):
    from .embed import embed_image, load_embedding_model, write_vector_record

    model = load_embedding_model(model_path)
    vec = embed_image(imageio.load_image(image_path), model)
    write_vector_record(vec, out, sidecar={"image": image_path})
    click.echo(f"d={vec.shape[0]} -> {out}")


# -- retrieve ----------------------------------------------------------------------


@main.group()
def retrieve():
    """Retrieval evaluation."""


@retrieve.command("eval")
@click.option("--results", "results_path", required=True, type=click.Path(exists=True),
              help="JSONL of {query_ref, ranked: [{product_id, score}]}")
@click.option("--relevance", "relevance_path", required=True, type=click.Path(exists=True),
              help="JSON map query_ref -> [relevant product ids]")
@click.option("--k", "ks", default="3,5,10,14", show_default=True)
@click.option("--out", type=click.Path(), default=None)
def retrieve_eval(results_path, relevance_path, ks, out):
    from .retrieve import RetrievalResult, precision_recall_at_k

    results = [
        RetrievalResult(
            query_ref=rec["query_ref"],
            ranked=[(r["product_id"], r["score"]) for r in rec["ranked"]],
        )
        for rec in read_jsonl(results_path)
    ]
    with open(relevance_path, "r", encoding="utf-8") as fh:
        relevance = {q: set(ids) for q, ids in json.load(fh).items()}
    k_list = [int(k) for k in ks.split(",")]
    table = precision_recall_at_k(results, relevance, k_list)
    csv = table.to_csv()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(csv)
        click.echo(f"wrote {out}")
    else:
        click.echo(csv, nl=False)


# -- pipeline ----------------------------------------------------------------------


@main.command("run")
@click.option("--registry", "registry_path", required=True, type=click.Path(exists=True))
@click.option("--manifest", required=True, type=click.Path(exists=True),
              help="JSONL of {request_id, images, ugc?}")
@click.option("--out", required=True, type=click.Path())
@click.option("--k", default=14, show_default=True)
def run(registry_path, manifest, out, k):
    from .pipeline import load_registry, run_batch

    registry = load_registry(registry_path)
    count = run_batch(registry, manifest, out, k=k)
    click.echo(f"{count} requests -> {out}")


@main.command("serve")
@click.option("--registry", "registry_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
def serve(registry_path, host, port):
    import uvicorn

    from .pipeline import create_app, load_registry

    app = create_app(load_registry(registry_path))
    uvicorn.run(app, host=host, port=port)


# -- review ----------------------------------------------------------------------


@main.group()
def review():
    """Active-learning review service."""


@review.command("serve")
@click.option("--candidates", "candidates_path", required=True, type=click.Path(exists=True))
@click.option("--records", "records_path", required=True, type=click.Path())
@click.option("--taxonomy", "taxonomy_path", type=click.Path(exists=True), default=None)
@click.option("--lease-seconds", default=60.0, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8081, show_default=True)
def review_serve(candidates_path, records_path, taxonomy_path, lease_seconds, host, port):
    import uvicorn

    from .detect import DEFAULT_TAXONOMY, load_taxonomy
    from .feedback import FeedbackStore, create_review_app, load_candidates_file

    store = FeedbackStore(records_path, lease_seconds=lease_seconds)
    store.add_candidates(load_candidates_file(candidates_path))
    taxonomy = load_taxonomy(taxonomy_path) if taxonomy_path else DEFAULT_TAXONOMY
    app = create_review_app(store, taxonomy=taxonomy)
    uvicorn.run(app, host=host, port=port)


@review.command("compact")
@click.option("--base", "base_path", required=True, type=click.Path(exists=True),
              help="ground-truth manifest the corrections apply to")
@click.option("--candidates", "candidates_path", required=True, type=click.Path(exists=True))
@click.option("--records", "records_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def review_compact(base_path, candidates_path, records_path, out):
    """Fold tagger verdicts into a corrected annotation manifest."""
    from .detect import load_gt_manifest, save_gt_manifest
    from .feedback import FeedbackStore, assemble_retrain_set, load_candidates_file

    base = load_gt_manifest(base_path)
    store = FeedbackStore(records_path)
    candidates = {c.candidate_id: c for c in load_candidates_file(candidates_path)}
    corrected = assemble_retrain_set(base, store.records, candidates)
    save_gt_manifest(corrected, out)
    click.echo(f"{len(store.records)} verdicts folded into {out}")


if __name__ == "__main__":
    sys.exit(main())
