"""Command-line interface.

Verbs: ``bench sweep|eval|profile``, ``synth render|augment``, ``data check``.
Exit codes: 0 success, 2 configuration error, 3 data error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .classify import EliminationConfig, classify_query
from .core import ConfigError, DataError, build_dictionary
from .data import DatasetSpec, SplitSpec, load_cloud_tree, load_dataset, make_splits
from .formats import read_ply, write_pgm
from .solvers import CrcConfig, SrcConfig
from .synth import Camera, PoseSweep, render_image, rotate_about_centroid, rotation_from_angles


def _resolution(text: str):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("resolution must look like 32x32")
    return (w, h)


def _common_flags(parser):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--resolution", type=_resolution, default=(32, 32),
                        help="working resolution WxH (default 32x32)")
    parser.add_argument("--mu", type=float, default=0.01,
                        help="ridge regularizer for the l2 solver")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="l1 weight; 0 selects 0.01*||X^T y||_inf per query")
    parser.add_argument("--proportion", type=float, default=0.0,
                        help="elimination proportion in [0, 1)")
    parser.add_argument("--theta", type=int, default=2,
                        help="training samples per class")
    parser.add_argument("--repeats", type=int, default=10)
    parser.add_argument("--out", type=Path, default=None, help="output path")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="posedict",
        description="Pose-robust representation-based classification toolkit",
    )
    top = parser.add_subparsers(dest="group", required=True)

    bench_p = top.add_parser("bench", help="evaluation harness")
    bench_sub = bench_p.add_subparsers(dest="verb", required=True)
    for verb, doc in (("sweep", "elimination-proportion sweep"),
                      ("eval", "single method/proportion evaluation"),
                      ("profile", "per-class error profile for one query")):
        sp = bench_sub.add_parser(verb, help=doc)
        sp.add_argument("root", type=Path, help="dataset directory root/<class>/<image>")
        _common_flags(sp)
        if verb == "sweep":
            sp.add_argument("--proportions", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
            sp.add_argument("--methods", default="crc,src,3dpd-crc")
            sp.add_argument("--clouds", type=Path, default=None,
                            help="cloud tree clouds/<class>/<sample>.ply")
            sp.add_argument("--angles", default="4,-4,8,-8,12,-12,16,-16,20,-20")
        elif verb == "eval":
            sp.add_argument("--method", default="crc", choices=bench.METHODS)
            sp.add_argument("--clouds", type=Path, default=None)
            sp.add_argument("--angles", default="4,-4,8,-8,12,-12,16,-16,20,-20")
        else:
            sp.add_argument("--query-index", type=int, default=0,
                            help="index into the first repeat's test set")
            sp.add_argument("--eliminate", action="store_true")

    synth_p = top.add_parser("synth", help="virtual-sample rendering")
    synth_sub = synth_p.add_subparsers(dest="verb", required=True)
    render_sp = synth_sub.add_parser("render", help="render one cloud to PGM")
    render_sp.add_argument("cloud", type=Path, help="ASCII PLY cloud")
    render_sp.add_argument("--yaw", type=float, default=0.0)
    render_sp.add_argument("--pitch", type=float, default=0.0)
    render_sp.add_argument("--roll", type=float, default=0.0)
    render_sp.add_argument("--focal", type=float, default=1000.0)
    render_sp.add_argument("--size", type=_resolution, default=(128, 128))
    _common_flags(render_sp)
    augment_sp = synth_sub.add_parser("augment", help="render a yaw sweep per cloud")
    augment_sp.add_argument("clouds", type=Path, help="cloud tree clouds/<class>/<sample>.ply")
    augment_sp.add_argument("--angles", default="4,-4,8,-8,12,-12,16,-16,20,-20")
    augment_sp.add_argument("--focal", type=float, default=1000.0)
    augment_sp.add_argument("--size", type=_resolution, default=(128, 128))
    _common_flags(augment_sp)

    data_p = top.add_parser("data", help="dataset utilities")
    data_sub = data_p.add_subparsers(dest="verb", required=True)
    check_sp = data_sub.add_parser("check", help="validate a dataset directory")
    check_sp.add_argument("root", type=Path)
    _common_flags(check_sp)

    return parser


def _load(args):
    spec = DatasetSpec(root=args.root, resolution=args.resolution)
    return load_dataset(spec)


def _augment_config(args, resolution):
    if getattr(args, "clouds", None) is None:
        return None
    clouds = load_cloud_tree(args.clouds)
    if not clouds:
        raise DataError(f"no .ply clouds found under {args.clouds}")
    any_cloud = next(iter(clouds.values()))
    cam = Camera.facing(any_cloud, focal=1000.0, image_size=(128, 128))
    sweep = PoseSweep(tuple(float(a) for a in args.angles.split(",")))
    return bench.AugmentConfig(clouds=clouds, base_cam=cam, sweep=sweep,
                               resolution=resolution)


def _run_bench(args):
    samples = _load(args)
    splits = make_splits(samples, SplitSpec(args.theta, args.repeats, args.seed))
    crc = CrcConfig(mu=args.mu)
    src = SrcConfig(lam=args.lam)
    if args.verb == "sweep":
        proportions = [float(p) for p in args.proportions.split(",") if p]
        methods = [m for m in args.methods.split(",") if m]
        reports = bench.sweep_proportions(splits, proportions, methods, args.theta,
                                          crc=crc, src=src,
                                          augment=_augment_config(args, args.resolution))
        out = args.out or Path("sweep.csv")
        bench.write_aggregate_csv(out, reports)
        bench.write_raw_csv(out.with_name(out.stem + "_raw" + out.suffix), reports)
        for r in reports:
            print(f"{r.method} theta={r.theta} proportion={r.proportion}: "
                  f"{r.mean_rate:.1f} +/- {r.std_rate:.2f}")
    elif args.verb == "eval":
        report = bench.evaluate(splits, args.method, args.theta, args.proportion,
                                crc=crc, src=src,
                                augment=_augment_config(args, args.resolution))
        if args.out:
            bench.write_aggregate_csv(args.out, [report])
        print(f"{report.method} theta={report.theta} proportion={report.proportion}: "
              f"{report.mean_rate:.1f} +/- {report.std_rate:.2f}")
    else:  # profile
        train, test = splits[0]
        if not (0 <= args.query_index < len(test)):
            raise ConfigError(f"query index {args.query_index} out of range")
        dictionary = build_dictionary(train, normalize=True)
        query, true_cid = test[args.query_index]
        cfg = EliminationConfig(proportion=args.proportion, solver=crc)
        blocks = bench.error_profile(dictionary, query, cfg,
                                     with_elimination=args.eliminate)
        out = args.out or Path("profile.csv")
        bench.write_profile_csv(out, blocks)
        predicted = classify_query(dictionary, query, crc).predicted
        print(f"query {args.query_index} (class {true_cid}): predicted {predicted}; "
              f"{len(blocks)} block(s) written to {out}")
    return 0


def _run_synth(args):
    if args.verb == "render":
        cloud = read_ply(args.cloud)
        cam = Camera.facing(cloud, focal=args.focal, image_size=args.size)
        rotated = rotate_about_centroid(cloud, args.yaw)
        if args.pitch or args.roll:
            R = rotation_from_angles(0.0, args.pitch, args.roll)
            cam = Camera(R @ cam.rotation, cam.translation, cam.focal,
                         cam.principal, cam.image_size)
        out = args.out or args.cloud.with_suffix(".pgm")
        write_pgm(out, render_image(rotated, cam))
        print(f"rendered {args.cloud} -> {out}")
    else:  # augment
        clouds = load_cloud_tree(args.clouds)
        if not clouds:
            raise DataError(f"no .ply clouds found under {args.clouds}")
        angles = [float(a) for a in args.angles.split(",")]
        out_dir = args.out or Path("virtual")
        out_dir.mkdir(parents=True, exist_ok=True)
        for key, cloud in sorted(clouds.items()):
            cam = Camera.facing(cloud, focal=args.focal, image_size=args.size)
            for angle in angles:
                image = render_image(rotate_about_centroid(cloud, angle), cam)
                name = key.replace("/", "_") + f"_yaw{angle:+g}.pgm"
                write_pgm(out_dir / name, image)
        print(f"wrote {len(clouds) * len(angles)} virtual images to {out_dir}")
    return 0


def _run_data(args):
    samples = _load(args)
    classes = sorted({cid for _, cid in samples})
    counts = {cid: sum(1 for _, c in samples if c == cid) for cid in classes}
    w, h = args.resolution
    print(f"{len(samples)} samples, {len(classes)} classes, {w}x{h} -> P={w * h}")
    smallest = min(counts.values())
    print(f"samples per class: min {smallest}, max {max(counts.values())}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.group == "bench":
            return _run_bench(args)
        if args.group == "synth":
            return _run_synth(args)
        return _run_data(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
