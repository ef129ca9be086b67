"""Command line interface: ``eof embed``, ``eof train``, ``eof bench``."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bench, learn
from .design import enumerate_sparse_grid, level_for_feature_count, truncate_random
from .embedding import SCALE_RAW, SCALE_SQRT, embed_batch
from .kernels import KernelSpec


def _add_kernel_flags(p):
    p.add_argument("--kernel", choices=["laplace", "sobolev", "bb"],
                   default="laplace")
    p.add_argument("--omega", type=float, default=1.0)


def _add_design_flags(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--level", type=int, help="full design at level n")
    group.add_argument("--num-features", type=int,
                       help="M features via random truncation of the smallest "
                            "full design that holds them")
    p.add_argument("--seed", type=int, default=0)


def _build_design(D, args):
    if args.level is not None:
        return enumerate_sparse_grid(D, args.level)
    n = level_for_feature_count(D, args.num_features)
    full = enumerate_sparse_grid(D, n)
    if args.num_features == len(full):
        return full
    return truncate_random(full, args.num_features, args.seed)


def _load_matrix(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return np.column_stack([data[name] for name in data.dtype.names])


def cmd_embed(args):
    X = _load_matrix(args.input)
    spec = KernelSpec(args.kernel, omega=args.omega, dim=X.shape[1])
    S = _build_design(X.shape[1], args)
    scale = SCALE_RAW if args.raw_scale else SCALE_SQRT
    F = embed_batch(spec, S, X, scale=scale).tocoo()
    with open(args.output, "w") as fh:
        fh.write(f"# {F.shape[0]} {F.shape[1]} {F.nnz}\n")
        for r, c, v in zip(F.row, F.col, F.data):
            fh.write(f"{r},{c},{float(v)!r}\n")
    print(f"wrote {F.nnz} nonzeros ({F.shape[0]}x{F.shape[1]}) to {args.output}")


def cmd_train(args):
    task = learn.REGRESSION if args.task == "reg" else learn.CLASSIFICATION
    raw = bench.load_csv(args.data, args.target, task)
    ds = bench.standardize(raw, split_ratio=args.split, seed=args.seed)
    spec = KernelSpec(args.kernel, omega=args.omega, dim=ds.D)
    S = _build_design(ds.D, args)
    F_train = embed_batch(spec, S, ds.X_train)
    F_test = embed_batch(spec, S, ds.X_test)
    lam = (learn.default_lambda(ds.N_train) if args.lam == "auto"
           else float(args.lam))
    if task == learn.REGRESSION:
        model = learn.ridge_fit(F_train, ds.y_train, lam)
    else:
        model = learn.logistic_fit(F_train, ds.y_train, lam, tol=1e-6)
    err = learn.test_error(model, F_test, ds.y_test)
    meta = {"kernel": args.kernel, "omega": repr(args.omega),
            "design": f"level={S.level_cap} M={len(S)} seed={S.seed}",
            "dataset": ds.name}
    learn.save_model(model, args.model_out, meta)
    kind = "mse" if task == learn.REGRESSION else "error rate"
    print(f"test {kind}: {err:.6g}  (M={len(S)}, lambda={lam:.4g}, "
          f"nnz_F={model.nnz_F}) -> {args.model_out}")


def cmd_bench(args):
    task = learn.REGRESSION if args.task == "reg" else learn.CLASSIFICATION
    raw = bench.load_csv(args.data, args.target, task)
    ds = bench.standardize(raw, split_ratio=args.split, seed=args.seed)
    methods = args.methods.split(",")
    for m in methods:
        if m not in bench.ALL_METHODS:
            raise SystemExit(f"unknown method {m!r}")
    m_grid = [int(v) for v in args.m.split(",")]
    results = bench.run_benchmark(ds, methods, m_grid, args.runs, args.seed,
                                  kernel=args.kernel,
                                  pool_factor=args.pool_factor)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "results.csv"), "w") as fh:
        fh.write(bench.report(results, fmt="csv"))
    with open(os.path.join(args.out, "table.txt"), "w") as fh:
        fh.write(bench.report(results, fmt="text"))
    with open(os.path.join(args.out, "curves.csv"), "w") as fh:
        fh.write(bench.curves_csv(results))
    print(bench.report(results, fmt="text"))
    print(f"results written to {args.out}/")


def build_parser():
    parser = argparse.ArgumentParser(prog="eof",
                                     description="sparse multilevel kernel "
                                                 "features and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_embed = sub.add_parser("embed", help="embed a CSV into sparse features")
    _add_kernel_flags(p_embed)
    _add_design_flags(p_embed)
    p_embed.add_argument("--input", required=True)
    p_embed.add_argument("--output", required=True)
    p_embed.add_argument("--raw-scale", action="store_true",
                         help="emit C*phi instead of sqrt(C)*phi")
    p_embed.set_defaults(func=cmd_embed)

    p_train = sub.add_parser("train", help="train a model on sparse features")
    _add_kernel_flags(p_train)
    _add_design_flags(p_train)
    p_train.add_argument("--task", choices=["reg", "clf"], required=True)
    p_train.add_argument("--lambda", dest="lam", default="auto",
                         help="regularization strength or 'auto' (N^-1/2)")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--target", default="target")
    p_train.add_argument("--split", type=float, default=0.7)
    p_train.add_argument("--model-out", default="model.txt")
    p_train.set_defaults(func=cmd_train)

    p_bench = sub.add_parser("bench", help="compare methods on a dataset")
    _add_kernel_flags(p_bench)
    p_bench.add_argument("--data", required=True)
    p_bench.add_argument("--target", default="target")
    p_bench.add_argument("--task", choices=["reg", "clf"], required=True)
    p_bench.add_argument("--methods", default="eof,rks,orf,lkrf,eerf")
    p_bench.add_argument("--m", required=True,
                         help="comma-separated feature counts")
    p_bench.add_argument("--runs", type=int, default=50)
    p_bench.add_argument("--seed", type=int, default=7)
    p_bench.add_argument("--split", type=float, default=0.7)
    p_bench.add_argument("--pool-factor", type=int, default=10)
    p_bench.add_argument("--out", default="results")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
