"""Command-line client for the occlusion service.

Every command talks HTTP. With ``--server URL`` it uses a running
service; otherwise it boots a private in-process server on an ephemeral
localhost port and tears it down on exit, so the CLI works standalone.
Paths in requests are resolved on the service side; with the default
in-process server that is the same filesystem.

Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
"""

from __future__ import annotations

import base64
import json
import threading
import time
from pathlib import Path

import click
import httpx
import uvicorn

from . import __version__, sidecar
from .errors import SidecarError

DATASETS = ("ferplus", "rafdb", "affectnet")

DEFAULTS = {
    "dataset": None,
    "pixels": None,
    "labels": None,
    "image_root": None,
    "label_list": None,
    "manifest": None,
    "split": "train",
    "landmarks": None,
    "out": None,
    "headset_width_mm": 207.1,
    "headset_height_mm": 98.6,
    "head_breadth_mm": 152.0,
    "vertical_offset_mm": 0.0,
    "fill": 0,
    "size": "224x224",
    "normalize": True,
    "flip": True,
    "replicate": True,
    "workers": 1,
}

_STR_KEYS = ("dataset", "pixels", "labels", "image_root", "label_list",
             "manifest", "split", "landmarks", "out", "size")
_FLOAT_KEYS = ("headset_width_mm", "headset_height_mm", "head_breadth_mm",
               "vertical_offset_mm")
_INT_KEYS = ("fill", "workers")
_BOOL_KEYS = ("normalize", "flip", "replicate")

REQUIRED_BY_DATASET = {
    "ferplus": ("pixels", "labels"),
    "rafdb": ("image_root", "label_list"),
    "affectnet": ("manifest", "image_root"),
}


def _coerce(key: str, raw: str, where: str):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise click.UsageError(f"{where}: bad value {raw!r} for key '{key.replace('_', '-')}'")


def load_config_file(path: str) -> dict:
    """Flat `key = value` file; keys mirror the flag names."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise click.UsageError(f"cannot read config file: {exc}")
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise click.UsageError(f"{path}:{line_no}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        if key not in DEFAULTS:
            raise click.UsageError(f"{path}:{line_no}: unknown config key '{key.replace('_', '-')}'")
        values[key] = _coerce(key, value.strip(), f"{path}:{line_no}")
    return values


def resolve_config(flag_values: dict, config_path: str | None) -> dict:
    """Precedence: defaults < config file < flags given on the command line."""
    cfg = dict(DEFAULTS)
    if config_path is not None:
        cfg.update(load_config_file(config_path))
    for key, value in flag_values.items():
        if value is not None:
            cfg[key] = value
    if cfg["dataset"] is not None and cfg["dataset"] not in DATASETS:
        raise click.UsageError(f"--dataset must be one of {', '.join(DATASETS)}")
    if cfg["workers"] < 1:
        raise click.UsageError("--workers must be >= 1")
    if not 0 <= cfg["fill"] <= 255:
        raise click.UsageError("--fill must be in 0..255")
    return cfg


def parse_size(text: str) -> tuple[int, int]:
    w, sep, h = text.lower().partition("x")
    try:
        out = int(w), int(h)
    except ValueError:
        out = (0, 0)
    if not sep or out[0] < 1 or out[1] < 1:
        raise click.UsageError(f"--size must look like 224x224, got {text!r}")
    return out


def print_config(cfg: dict) -> None:
    for key in DEFAULTS:
        if cfg[key] is None:
            continue
        value = cfg[key]
        if isinstance(value, bool):
            value = "true" if value else "false"
        click.echo(f"{key.replace('_', '-')} = {value}")


def _require(cfg: dict, *keys: str) -> None:
    for key in keys:
        if cfg[key] is None:
            raise click.UsageError(f"missing required option --{key.replace('_', '-')}")


def _dataset_payload(cfg: dict) -> dict:
    _require(cfg, "dataset")
    _require(cfg, *REQUIRED_BY_DATASET[cfg["dataset"]])
    if cfg["dataset"] == "ferplus":
        return {"kind": "ferplus", "pixels_csv": cfg["pixels"], "labels_csv": cfg["labels"]}
    if cfg["dataset"] == "rafdb":
        return {"kind": "rafdb", "image_root": cfg["image_root"], "label_list": cfg["label_list"]}
    return {
        "kind": "affectnet",
        "manifest_csv": cfg["manifest"],
        "image_root": cfg["image_root"],
        "split": cfg["split"],
    }


def _headset_payload(cfg: dict) -> dict:
    return {
        "width_mm": cfg["headset_width_mm"],
        "height_mm": cfg["headset_height_mm"],
        "head_breadth_mm": cfg["head_breadth_mm"],
        "vertical_offset_mm": cfg["vertical_offset_mm"],
    }


def _start_local_server():
    from .service import app

    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, name="vrocclude-service", daemon=True)
    thread.start()
    deadline = time.monotonic() + 10.0
    while not server.started:
        if time.monotonic() > deadline or not thread.is_alive():
            raise click.ClickException("local service failed to start")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    return server, f"http://127.0.0.1:{port}"


class ServiceClient:
    def __init__(self, server: str | None):
        self._own = None
        if server is None:
            self._own, server = _start_local_server()
        self.http = httpx.Client(base_url=server, timeout=httpx.Timeout(600.0, connect=10.0))

    def post(self, path: str, payload: dict) -> httpx.Response:
        try:
            return self.http.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise click.ClickException(f"cannot reach the service: {exc}")

    def close(self) -> None:
        self.http.close()
        if self._own is not None:
            self._own.should_exit = True

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _check(resp: httpx.Response) -> dict:
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        if isinstance(detail, dict) and "message" in detail:
            raise click.ClickException(str(detail["message"]))
        if isinstance(detail, list):
            detail = "; ".join(str(item.get("msg", item)) for item in detail)
        raise click.ClickException(str(detail))
    return resp.json()


def common_options(fn):
    fn = click.option("--config", "config_path", type=str, default=None,
                      help="Flat key = value file; flags given here override it.")(fn)
    fn = click.option("--server", type=str, default=None,
                      help="Base URL of a running service; default boots one in-process.")(fn)
    return fn


def dataset_options(fn):
    fn = click.option("--dataset", type=click.Choice(DATASETS), default=None)(fn)
    fn = click.option("--pixels", type=str, default=None, help="FER+ pixels CSV.")(fn)
    fn = click.option("--labels", type=str, default=None, help="FER+ label-votes CSV.")(fn)
    fn = click.option("--image-root", type=str, default=None, help="RAF-DB/AffectNet image directory.")(fn)
    fn = click.option("--label-list", type=str, default=None, help="RAF-DB label list file.")(fn)
    fn = click.option("--manifest", type=str, default=None, help="AffectNet manifest CSV.")(fn)
    fn = click.option("--split", type=str, default=None, help="Split name for AffectNet rows.")(fn)
    return fn


def headset_options(fn):
    fn = click.option("--headset-width-mm", type=float, default=None)(fn)
    fn = click.option("--headset-height-mm", type=float, default=None)(fn)
    fn = click.option("--head-breadth-mm", type=float, default=None)(fn)
    fn = click.option("--vertical-offset-mm", type=float, default=None)(fn)
    fn = click.option("--fill", type=int, default=None, help="Patch gray level, 0..255.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="vrocclude")
def cli():
    """Simulate VR-headset occlusion on facial expression datasets."""


@cli.command()
@dataset_options
@click.option("--landmarks", type=str, default=None, help="Landmark sidecar (.jsonl).")
@click.option("--out", type=str, default=None, help="Output dataset directory.")
@headset_options
@click.option("--size", type=str, default=None, help="Output size WxH.")
@click.option("--normalize/--no-normalize", default=None)
@click.option("--flip/--no-flip", default=None, help="Train-split horizontal flip augmentation.")
@click.option("--replicate/--no-replicate", default=None, help="Grayscale to 3 channels.")
@click.option("--workers", type=int, default=None)
@click.option("--print-config", is_flag=True, help="Print the resolved config and exit.")
@common_options
def occlude(config_path, server, **flags):
    """Occlude a dataset and export images, manifest.tsv and report.json."""
    show = flags.pop("print_config")
    cfg = resolve_config(flags, config_path)
    _require(cfg, "landmarks", "out")
    _dataset_payload(cfg)  # validates dataset selection and its paths
    out_w, out_h = parse_size(cfg["size"])
    if show:
        print_config(cfg)
        return
    payload = {
        "dataset": _dataset_payload(cfg),
        "landmarks_path": cfg["landmarks"],
        "out_dir": cfg["out"],
        "options": {
            "headset": _headset_payload(cfg),
            "fill": cfg["fill"],
            "out_width": out_w,
            "out_height": out_h,
            "normalize": cfg["normalize"],
            "flip_train": cfg["flip"],
            "replicate": cfg["replicate"],
            "workers": cfg["workers"],
        },
    }
    with ServiceClient(server) as client:
        body = _check(client.post("/run", payload))
    report = body["report"]
    for status in ("occluded", "skipped_no_landmarks", "failed_degenerate"):
        click.echo(f"{status:<22} {report['status_counts'].get(status, 0)}")
    click.echo(f"augmented flips        {report['augmented']}")
    click.echo(f"report: {body['report_path']}")


@cli.command()
@click.option("--image", type=str, required=True, help="Source image (PNG/JPEG).")
@click.option("--landmarks", type=str, required=True, help="Landmark sidecar (.jsonl).")
@click.option("--image-id", type=str, default=None, help="Sidecar key; defaults to the image stem.")
@click.option("--out", type=str, default=None, help="Overlay path; defaults to <stem>_preview.png.")
@headset_options
@common_options
def preview(image, landmarks, image_id, out, server, config_path, **flags):
    """Write a side-by-side overlay: patch outline next to the occluded image."""
    cfg = resolve_config(flags, config_path)
    image_path = Path(image)
    if image_id is None:
        image_id = image_path.stem
    if out is None:
        out = str(image_path.with_name(image_path.stem + "_preview.png"))
    try:
        lm_set = sidecar.parse_landmark_file(landmarks)
    except SidecarError as exc:
        raise click.ClickException(f"{landmarks}:{exc.line_no}: {exc}")
    except OSError as exc:
        raise click.ClickException(str(exc))
    rec = lm_set.get(image_id)
    if rec is None:
        raise click.ClickException(f"no landmark record for '{image_id}' in {landmarks}")
    try:
        raw = image_path.read_bytes()
    except OSError as exc:
        raise click.ClickException(str(exc))

    points = [[float(x), float(y)] for x, y in rec.points]
    headset = _headset_payload(cfg)
    with ServiceClient(server) as client:
        patch = _check(client.post("/patch", {"landmarks": points, "headset": headset}))
        resp = client.post("/preview", {
            "image_png_b64": base64.b64encode(raw).decode("ascii"),
            "landmarks": points,
            "headset": headset,
            "fill": cfg["fill"],
        })
        if resp.status_code >= 400:
            _check(resp)
        png = resp.content
    try:
        Path(out).write_bytes(png)
    except OSError as exc:
        raise click.ClickException(str(exc))
    corners = " ".join(f"({x!r},{y!r})" for x, y in patch["corners"])
    click.echo(f"corners: {corners}")
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--landmarks", type=str, default=None, help="Landmark sidecar (.jsonl).")
@dataset_options
@common_options
def validate(config_path, server, **flags):
    """Check a sidecar file; with a dataset, also report landmark coverage."""
    landmarks = flags.pop("landmarks")
    cfg = resolve_config(flags, config_path)
    if landmarks is None:
        landmarks = cfg["landmarks"]
    if landmarks is None:
        raise click.UsageError("missing required option --landmarks")
    payload: dict = {"landmarks_path": landmarks}
    if cfg["dataset"] is not None:
        payload["dataset"] = _dataset_payload(cfg)
    with ServiceClient(server) as client:
        body = _check(client.post("/validate", payload))
    click.echo(f"records: {body['records']}")
    if body.get("covered") is not None:
        total = body["covered"] + len(body["missing"])
        pct = 100.0 * body["covered"] / total if total else 100.0
        click.echo(f"coverage: {body['covered']}/{total} ({pct:.1f}%)")
        for image_id in body["missing"][:20]:
            click.echo(f"  missing landmarks: {image_id}")
        if len(body["missing"]) > 20:
            click.echo(f"  ... and {len(body['missing']) - 20} more")
    click.echo(f"warnings: {sum(len(w['warnings']) for w in body['warnings'])}")
    for item in body["warnings"]:
        for msg in item["warnings"]:
            click.echo(f"  {item['image_id']}: {msg}")


@cli.command()
@click.argument("report_path", type=str)
def stats(report_path):
    """Summarize a run's report.json: counts and occluded-fraction spread."""
    try:
        with open(report_path, encoding="utf-8") as fh:
            report = json.load(fh)
        status_counts = report["status_counts"]
        split_counts = report["split_counts"]
        label_counts = report["label_counts"]
        frac = report["occluded_fraction"]
    except (OSError, ValueError, KeyError) as exc:
        raise click.ClickException(f"unreadable report {report_path}: {exc!r}")

    click.echo("manifest entries by split:")
    if not split_counts:
        click.echo("  (none)")
    for split in sorted(split_counts):
        click.echo(f"  {split:<8} {split_counts[split]}")
    click.echo("occluded outputs by split/label:")
    if not label_counts:
        click.echo("  (none)")
    for split in sorted(label_counts):
        for label in sorted(label_counts[split]):
            click.echo(f"  {split:<8} {label:<12} {label_counts[split][label]}")
    click.echo("statuses:")
    for status in ("occluded", "skipped_no_landmarks", "failed_degenerate"):
        click.echo(f"  {status:<22} {status_counts.get(status, 0)}")
    if frac["mean"] is None:
        click.echo("occluded_fraction: n/a (no occluded images)")
    else:
        pcts = frac["percentiles"]
        spread = " ".join(f"{k}={pcts[k]:.4f}" for k in ("p25", "p50", "p75", "p90"))
        click.echo(f"occluded_fraction: mean={frac['mean']:.4f} {spread}")


@cli.command()
@click.option("--host", type=str, default="127.0.0.1")
@click.option("--port", type=int, default=8008)
def serve(host, port):
    """Run the occlusion service in the foreground."""
    from .service import app

    uvicorn.run(app, host=host, port=port, log_level="info")


main = cli

if __name__ == "__main__":
    main()
