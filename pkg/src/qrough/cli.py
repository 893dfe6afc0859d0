"""Command-line entry points: ``segment``, ``threat``, ``eval`` and ``synth``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .agent import AgentConfig, QTable
from .evaluation import (
    SCENARIOS, NoRegion, SynthScenario, aggregate_metrics, bbox_of, corner_rmse,
    pixel_metrics, synth_sequence,
)
from .frame_io import (
    FrameIOError, list_frames, load_sequence, read_mask, write_frame, write_mask, write_report,
)
from .granulation import DEFAULT_THR
from .pipeline import segment_sequence, track_threat
from .threat import AlarmPolicy, choose_p

log = logging.getLogger("qrough")


def _add_agent_args(p):
    p.add_argument("--input", required=True, help="directory of numbered frame images")
    p.add_argument("--pattern", default=None, help="filename glob inside --input")
    p.add_argument("--thr", type=int, default=DEFAULT_THR, help="granule colour threshold (default 30)")
    p.add_argument("--gamma", type=float, default=0.9, help="discount factor (default 0.9)")
    p.add_argument("--quant-levels", type=int, default=16)
    p.add_argument("--lookahead", type=int, default=1)
    p.add_argument("--mask-format", choices=("pgm", "png"), default="pgm")
    p.add_argument("--load-qtable", type=Path, default=None)
    p.add_argument("--save-qtable", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrough", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="write per-frame fire masks")
    _add_agent_args(p)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("threat", help="fire masks plus JSON-lines threat report")
    _add_agent_args(p)
    p.add_argument("--fps", type=float, required=True)
    p.add_argument("--p", type=int, default=None, help="recency window (default: round(fps))")
    p.add_argument("--alarm-tau", type=float, default=0.2)
    p.add_argument("--alarm-k", type=int, default=None, help="default: round(fps/2)")
    p.add_argument("--report", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None, help="also write masks here")
    p.add_argument("--plot", type=Path, default=None, help="CSV of frame_index,threat")

    p = sub.add_parser("eval", help="compare predicted masks with ground truth")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--gt", type=Path, required=True)
    p.add_argument("--report", type=Path, required=True)

    p = sub.add_parser("synth", help="write a synthetic sequence with ground truth")
    p.add_argument("--scenario", choices=SCENARIOS, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--width", type=int, default=320)
    p.add_argument("--height", type=int, default=240)
    p.add_argument("--base-area", type=int, default=3000)
    p.add_argument("--rate", type=float, default=1.01)
    p.add_argument("--seed", type=int, default=0)
    return ap


def _agent_setup(args):
    cfg = AgentConfig(args.gamma, args.quant_levels, args.lookahead)
    qt = QTable.load(args.load_qtable) if args.load_qtable else QTable(cfg.quant_levels)
    return cfg, qt


def _mask_path(out: Path, frame, fmt: str) -> Path:
    stem = Path(frame.source).stem if frame.source else f"frame_{frame.index:05d}"
    return out / f"{stem}.{fmt}"


def _out_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_segment(args) -> int:
    cfg, qt = _agent_setup(args)
    out = _out_dir(args.out)
    n = 0
    for frame, seg in segment_sequence(load_sequence(args.input, args.pattern), cfg, qt, args.thr):
        write_mask(seg.mask, _mask_path(out, frame, args.mask_format))
        qt = seg.qtable
        n += 1
    if args.save_qtable:
        qt.save(args.save_qtable)
    log.info("segmented %d frames", n)
    return 0


def cmd_threat(args) -> int:
    cfg, qt = _agent_setup(args)
    p = args.p if args.p is not None else choose_p(args.fps)
    if args.alarm_k:
        policy = AlarmPolicy(args.alarm_tau, args.alarm_k)
    else:
        policy = AlarmPolicy.for_fps(args.fps, args.alarm_tau)
    out = _out_dir(args.out) if args.out else None
    header = {
        "fps": args.fps, "p": p, "alarm_tau": policy.tau, "alarm_k": policy.k, "thr": args.thr,
        "gamma": cfg.gamma, "quant_levels": cfg.quant_levels, "lookahead_depth": cfg.lookahead_depth,
        "version": __version__,
    }
    reports = []
    frames = load_sequence(args.input, args.pattern)
    for frame, seg, rep in track_threat(frames, p, policy, cfg, qt, args.thr):
        if out is not None:
            write_mask(seg.mask, _mask_path(out, frame, args.mask_format))
        qt = seg.qtable
        reports.append(rep)
    write_report(reports, args.report, header=header)
    if args.plot:
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write("frame_index,threat\n")
            for r in reports:
                fh.write(f"{r.frame_index},{r.threat!r}\n")
    if args.save_qtable:
        qt.save(args.save_qtable)
    log.info("scored %d frames, %d with alarm", len(reports), sum(r.alarm for r in reports))
    return 0


def cmd_eval(args) -> int:
    preds = list_frames(args.pred)
    gts = list_frames(args.gt)
    if len(preds) != len(gts):
        raise FrameIOError(f"{len(preds)} predicted masks but {len(gts)} ground-truth masks")
    per_frame, rmses, penalized = [], [], []
    undefined = 0
    for pp, gp in zip(preds, gts):
        pm, gm = read_mask(pp), read_mask(gp)
        if pm.shape != gm.shape:
            raise FrameIOError(f"dimension mismatch: {pp.name} vs {gp.name}")
        per_frame.append(pixel_metrics(pm, gm))
        pb, gb = bbox_of(pm), bbox_of(gm)
        try:
            rmses.append(corner_rmse(pb, gb))
            penalized.append(rmses[-1])
        except NoRegion:
            undefined += 1
            if pb is None and gb is not None:
                penalized.append(math.hypot(pm.shape[0], pm.shape[1]))
    summary = {"n_frames": len(per_frame), "undefined_frames": undefined,
               "avg_corner_rmse": None, "avg_corner_rmse_penalized": None}
    if per_frame:
        m = aggregate_metrics(per_frame)
        summary.update(fp_pct=m.fp_pct, fn_pct=m.fn_pct, precision=m.precision, recall=m.recall)
    if rmses:
        summary["avg_corner_rmse"] = sum(rmses) / len(rmses)
    if penalized:
        summary["avg_corner_rmse_penalized"] = sum(penalized) / len(penalized)
    try:
        Path(args.report).write_text(json.dumps(summary, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise FrameIOError(f"cannot write report {args.report}: {exc}") from exc
    return 0


def cmd_synth(args) -> int:
    s = SynthScenario(args.scenario, args.frames, args.base_area, args.rate,
                      args.width, args.height, seed=args.seed)
    frames, gts = synth_sequence(s)
    fdir = _out_dir(args.out / "frames")
    gdir = _out_dir(args.out / "gt")
    for f, g in zip(frames, gts):
        write_frame(f, fdir / f"frame_{f.index:05d}.ppm")
        write_mask(g, gdir / f"frame_{f.index:05d}.pgm")
    return 0


COMMANDS = {"segment": cmd_segment, "threat": cmd_threat, "eval": cmd_eval, "synth": cmd_synth}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (FrameIOError, ValueError, OSError) as exc:
        print(f"qrough {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
