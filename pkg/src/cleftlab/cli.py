"""Command-line driver.

Exit codes: 0 when every check passes, 1 when a check fails or stays
undetermined, 2 on input errors (unreadable or malformed files, unknown
names, bad field).
"""
import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .fileformat import StructureError, bind_structure, serialize_structure, parse_structure
from .gallery import GALLERY_IDS, build_gallery
from .linalg import Field, FieldError
from .report import Report
from .suites import SUITE_NAMES, resolve_suites, run_suite

VERBS = SUITE_NAMES + ("gallery", "report")
EXTRA_IDS = ("sweedler",)


class InputError(Exception):
    pass


def _field(name):
    try:
        return Field.from_name(name)
    except FieldError as e:
        raise InputError(str(e))


def _gallery_id(name):
    for ident in GALLERY_IDS + EXTRA_IDS:
        if ident.lower() == name.lower():
            return ident
    return None


def _load(source, field_name, order):
    """Instance dict for a gallery id or a structure file path."""
    ident = _gallery_id(source)
    if ident is not None and not os.path.exists(source):
        inst = build_gallery(ident, _field(field_name or "q"), n=order)
        inst["id"] = ident if ident != "G1" else "G1(n=%d)" % order
        return inst
    try:
        with open(source) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (source, e.strerror))
    try:
        doc = parse_structure(text)
        if field_name is not None and doc.field != _field(field_name):
            raise InputError("%s declares field %s, not %s" % (source, doc.field.name, field_name))
        inst = bind_structure(doc)
    except StructureError as e:
        raise InputError("%s: %s: %s" % (source, type(e).__name__, e))
    inst["id"] = os.path.basename(source)
    return inst


def _plain(x):
    """JSON-friendly copy of a witness."""
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def _task(args):
    source, field_name, order, suite, seed = args
    inst = _load(source, field_name, order)
    try:
        rep = run_suite(inst, suite, seed=seed)
    except Exception as e:  # a crash inside a suite is reported as a failed check
        rep = Report(("%s %s" % (inst.get("id", ""), suite)).strip())
        rep.add("suite completed", "fail", detail="%s: %s" % (type(e).__name__, e))
    if rep is None:
        return None
    return rep.title, [(c.name, c.status, _plain(c.witness), c.detail) for c in rep.checks]


def _rebuild(result):
    title, checks = result
    rep = Report(title)
    for name, status, witness, detail in checks:
        rep.add(name, status, witness, detail)
    return rep


def run_tasks(tasks, jobs):
    """Run (source, field, order, suite, seed) tasks; results keep task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_task, t) for t in tasks]
        return [f.result() for f in futures]


def build_parser():
    p = argparse.ArgumentParser(prog="cleftlab", description="Hopf algebroid extension checks.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("sources", nargs="*",
                   help="structure files or built-in instance ids (gallery: ids only)")
    p.add_argument("--field", default=None, help="q or fp:<p> (built-in instances; default q)")
    p.add_argument("--suite", default=None, help="suite name or 'all'")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--witnesses", action="store_true", help="print witnesses and details")
    p.add_argument("--order", type=int, default=2, help="group order for G1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--serialize", action="store_true",
                   help="gallery: print the structure files instead of running suites")
    return p


def _emit(reports, fmt, witnesses, out):
    total = sum(len(r.checks) for r in reports)
    failed = sum(len(r.failures) for r in reports)
    undetermined = sum(1 for r in reports for c in r.checks if c.status == "undetermined")
    for r in reports:
        print(r.to_text(witnesses) if fmt == "text" else r.to_structured(witnesses), file=out)
    if fmt == "text":
        print("# summary: %d checks, %d failed, %d undetermined" % (total, failed, undetermined), file=out)
    else:
        import json
        print(json.dumps({"summary": {"checks": total, "failed": failed,
                                      "undetermined": undetermined}}, sort_keys=True), file=out)
    return 0 if failed == 0 and undetermined == 0 else 1


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_intermixed_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        if args.order < 1:
            raise InputError("group order must be at least 1")
        if args.field is not None:
            _field(args.field)
        sources = args.sources
        if args.verb == "gallery":
            bad = [s for s in sources if _gallery_id(s) is None]
            if bad:
                raise InputError("unknown gallery instance %r" % bad[0])
            sources = [_gallery_id(s) for s in sources] or list(GALLERY_IDS)
            if args.serialize:
                for s in sources:
                    print(serialize_structure(_load(s, args.field, args.order)), end="", file=out)
                return 0
            if args.suite is None:
                for s in sources:
                    print(s, file=out)
                return 0
        elif not sources:
            raise InputError("no input given")
        suite = args.suite if args.verb in ("gallery", "report") else args.verb
        if args.verb != "gallery" and args.verb != "report" and args.suite not in (None, args.verb):
            raise InputError("verb %r runs its own suite; use 'report --suite'" % args.verb)
        try:
            names = resolve_suites(suite)
        except KeyError as e:
            raise InputError(str(e.args[0]))
        for s in sources:
            _load(s, args.field, args.order)  # surface input errors before running anything
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    tasks = [(s, args.field, args.order, name, args.seed) for s in sources for name in names]
    results = run_tasks(tasks, args.jobs)
    reports = [_rebuild(r) for r in results if r is not None]
    if not reports:
        print("error: suite %s does not apply to the given input" % suite, file=sys.stderr)
        return 2
    return _emit(reports, args.format, args.witnesses, out)


if __name__ == "__main__":
    sys.exit(main())
