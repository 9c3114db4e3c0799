#!/usr/bin/env python3
"""
Command Line Interface for coded light-field simulation and reconstruction

Every command prints one JSON summary line on stdout; progress goes to stderr.
Exit codes: 0 ok, 1 unexpected error, 2 invalid arguments, 3 I/O failure, 4 validation failure,
5 solver divergence.
"""

import sys
import os
import argparse
import logging
import json
import time
from enum import Enum, IntEnum
from pathlib import Path
from typing import Any, Dict, List, Optional
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from lf_core.errors import (
    CodedModelError, LightFieldError, LightFieldIOError, LightFieldShapeError, SolverDivergenceError
)
from lf_core.light_field import CENTER, AngularOffset, extract_epi, shear
from lf_io import (
    CaptureManifest, load_coded, load_lf, load_model, read_manifest, save_coded, save_disparity,
    save_image, save_lf, save_model, save_report, write_manifest
)
from lf_metrics import evaluate_light_field
from lf_sensing import (
    CodeNormalizedCenterView, GivenFileCenterView, OracleCenterView, Scheme, capture_focus_defocus,
    gen_aperture_models, gen_clf_model, gen_defocus_model, simulate
)
from lf_solve import SolverConfig, SolverMode, parse_override, solve_disparity
from lf_warp import multiscale_texture, plane_scene, ramp_texture, render_lf, smooth_texture, two_plane_scene
from protocols import CenterViewEstimatorProtocol
from runtime import configure_logging, load_settings


logger = logging.getLogger("lf_cli")

ALLINFOCUS_NAME = "allinfocus.pfm"


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    IO = 3
    VALIDATION = 4
    DIVERGENCE = 5


class CliScheme(str, Enum):
    CLF = "clf"
    CA = "ca"
    FOCDEF = "focdef"
    DEFOCUS_ONLY = "defocus-only"


class CenterSource(str, Enum):
    ORACLE = "oracle"
    GIVEN_FILE = "given-file"
    CODE_NORMALIZED = "code-normalized-baseline"


# model scheme each capture scheme is built from
MODEL_SCHEMES = {
    CliScheme.CLF: Scheme.CLF,
    CliScheme.CA: Scheme.CODED_APERTURE,
    CliScheme.FOCDEF: Scheme.DEFOCUS,
    CliScheme.DEFOCUS_ONLY: Scheme.DEFOCUS,
}


class CliUsageError(Exception):
    """Invalid command-line arguments (exit 2)"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(f"{self.prog}: {message}")


class RunSpec(BaseModel):
    """Fully resolved description of one CLI invocation"""
    subcommand: str
    scheme: Optional[CliScheme] = None
    lf: Optional[str] = None
    inp: Optional[str] = None
    out: Optional[str] = None
    model: Optional[str] = None
    config: Optional[str] = None
    seed: int = 0
    center_source: Optional[CenterSource] = None
    center: Optional[str] = None
    exclude: List[str] = Field(default_factory=list)
    dry_run: bool = False
    pipeline: bool = False
    shots: int = Field(1, ge=1)
    mode: Optional[SolverMode] = None
    overrides: Dict[str, Any] = Field(default_factory=dict)
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("overrides")
    @classmethod
    def _check_overrides(cls, value: Dict[str, Any]) -> Dict[str, Any]:
        # unknown keys and out-of-range values are argument errors, not config-file errors
        SolverConfig().with_overrides(value)
        return value

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunSpec":
        required = {
            "simulate": ("scheme", "lf", "out"),
            "reconstruct": ("inp", "out"),
            "evaluate": ("lf", "inp"),
            "epi": ("lf", "out"),
            "shear": ("lf", "out"),
            "synth": ("out",),
        }.get(self.subcommand, ())
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.subcommand} requires " + ", ".join(f"--{m}" for m in missing))

        if self.shots > 1 and self.scheme is not CliScheme.CA:
            raise ValueError("--shots > 1 is only meaningful for --scheme ca")
        if self.model is not None and self.scheme is None:
            raise ValueError("--model needs an explicit --scheme")
        if self.model is not None and self.scheme is CliScheme.FOCDEF:
            raise ValueError("focdef needs both the all-in-focus and the defocus image; pass a capture directory")
        if self.center_source is CenterSource.ORACLE and self.lf is None:
            raise ValueError("--center-source oracle needs the ground-truth light field (--lf)")
        if self.center_source is CenterSource.GIVEN_FILE and self.center is None and self.scheme not in (None, CliScheme.FOCDEF):
            raise ValueError("--center-source given-file needs --center PATH")
        if self.mode is SolverMode.SUPERVISED and self.lf is None:
            raise ValueError("supervised mode needs the ground-truth light field (--lf)")
        if self.pipeline and self.lf is None:
            raise ValueError("--pipeline evaluates against ground truth and needs --lf")
        for text in self.exclude:
            AngularOffset.parse(text)
        return self

    def excluded_offsets(self) -> List[AngularOffset]:
        return [AngularOffset.parse(text) for text in self.exclude]


def _emit(summary: Dict[str, Any]) -> None:
    print(json.dumps(summary, sort_keys=True))


def _emit_error(error: BaseException, code: ExitCode) -> None:
    if isinstance(error, ValidationError):
        message = "; ".join(detail["msg"] for detail in error.errors())
    else:
        message = str(error).splitlines()[0] if str(error) else ""
    line = {"error": type(error).__name__, "exit_code": int(code), "message": message}
    print(json.dumps(line, sort_keys=True), file=sys.stderr)


class LightFieldCLI:
    """Command line interface for coded light-field workflows"""

    def __init__(self):
        self.settings = load_settings()
        configure_logging(self.settings.log_level, self.settings.log_format)

    # ------------------------------------------------------------------
    # simulate

    def cmd_simulate(self, spec: RunSpec) -> Dict[str, Any]:
        """Simulate a capture of a light-field directory into a capture directory"""
        lf = load_lf(spec.lf)
        a_u, a_v = lf.angular_shape
        height, width = lf.spatial_shape
        out = Path(spec.out)
        logger.info(f"📷 Simulating {spec.scheme.value} capture of {spec.lf}")

        allinfocus_name = None
        if spec.scheme is CliScheme.CLF:
            models = [gen_clf_model(
                a_u, a_v,
                tile=spec.params.get("tile", 15),
                seed=spec.seed,
                shift_per_view=spec.params.get("shift_per_view", 1),
                spatial_shape=(height, width),
            )]
        elif spec.scheme is CliScheme.CA:
            models = gen_aperture_models(a_u, a_v, seed=spec.seed, shots=spec.shots)
        else:
            models = [gen_defocus_model(a_u, a_v)]

        coded_names, model_names = [], []
        for k, model in enumerate(models):
            if spec.scheme is CliScheme.FOCDEF:
                allinfocus, coded = capture_focus_defocus(lf)
                allinfocus_name = ALLINFOCUS_NAME
                save_image(out / allinfocus_name, allinfocus)
            else:
                coded = simulate(lf, model)
            coded_names.append(f"coded_{k}.pfm")
            model_names.append(f"model_{k}.lfcm")
            save_coded(coded, out / coded_names[-1])
            save_model(model, out / model_names[-1])

        manifest = CaptureManifest(
            A_u=a_u, A_v=a_v, H=height, W=width,
            scheme=spec.scheme.value,
            seed=spec.seed,
            coded=coded_names,
            models=model_names,
            allinfocus=allinfocus_name,
        )
        write_manifest(out, manifest)
        logger.info(f"✅ Wrote {len(coded_names)} coded image(s) to {out}")
        return {
            "command": "simulate",
            "scheme": spec.scheme.value,
            "out": str(out),
            "coded": coded_names,
            "models": model_names,
            "allinfocus": allinfocus_name,
        }

    # ------------------------------------------------------------------
    # reconstruct

    def _load_capture(self, spec: RunSpec):
        """Coded images, models, scheme and all-in-focus path from --in/--model"""
        if spec.model is not None:
            coded = [load_coded(spec.inp)]
            models = [load_model(spec.model)]
            return spec.scheme, coded, models, None

        capture_dir = Path(spec.inp)
        if not capture_dir.is_dir():
            raise LightFieldIOError(f"capture directory not found: {capture_dir} (pass --model for a single coded image)")
        manifest = read_manifest(capture_dir, CaptureManifest)
        try:
            recorded = CliScheme(manifest.scheme)
        except ValueError as e:
            raise CodedModelError(f"{capture_dir}: unknown capture scheme {manifest.scheme!r}") from e
        if spec.scheme is not None and spec.scheme is not recorded:
            raise CliUsageError(f"--scheme {spec.scheme.value} does not match the {recorded.value} capture in {capture_dir}")
        if recorded is CliScheme.FOCDEF and manifest.allinfocus is None:
            raise CodedModelError(f"{capture_dir}: focdef capture without an all-in-focus image")

        coded = [load_coded(capture_dir / name) for name in manifest.coded]
        models = [load_model(capture_dir / name) for name in manifest.models]
        allinfocus = capture_dir / manifest.allinfocus if manifest.allinfocus else None
        return recorded, coded, models, allinfocus

    def _center_estimator(self, spec: RunSpec, scheme: CliScheme, truth, allinfocus: Optional[Path]) -> CenterViewEstimatorProtocol:
        source = spec.center_source
        if source is None:
            if scheme is CliScheme.FOCDEF:
                source = CenterSource.GIVEN_FILE
            elif truth is not None:
                source = CenterSource.ORACLE
            else:
                source = CenterSource.CODE_NORMALIZED

        if source is CenterSource.ORACLE:
            return OracleCenterView(truth)
        if source is CenterSource.GIVEN_FILE:
            path = spec.center or allinfocus
            if path is None:
                raise CliUsageError("--center-source given-file needs --center PATH")
            return GivenFileCenterView(path)
        return CodeNormalizedCenterView()

    def _solver_config(self, spec: RunSpec) -> SolverConfig:
        path = spec.config or self.settings.solver_config_path
        config = SolverConfig.from_json_file(path) if path else SolverConfig()
        overrides = dict(spec.overrides)
        overrides["seed"] = spec.seed
        if spec.mode is not None:
            overrides["mode"] = spec.mode.value
        return config.with_overrides(overrides)

    def cmd_reconstruct(self, spec: RunSpec) -> Dict[str, Any]:
        """Estimate disparity from a capture and render the full light field"""
        scheme, coded, models, allinfocus = self._load_capture(spec)
        for model in models:
            if model.scheme is not MODEL_SCHEMES[scheme]:
                raise CodedModelError(f"{scheme.value} reconstruction got a {model.scheme.value} model")
        truth = load_lf(spec.lf) if spec.lf else None
        config = self._solver_config(spec)

        estimator = self._center_estimator(spec, scheme, truth, allinfocus)
        center = estimator.estimate(coded, models)
        if center.shape[:2] != coded[0].spatial_shape:
            raise LightFieldShapeError(
                f"centerview extents {center.shape[:2]} do not match coded image {coded[0].spatial_shape}"
            )
        logger.info(f"🎯 Centerview from {estimator.name}, scheme {scheme.value}, {len(coded)} coded image(s)")

        if config.mode is SolverMode.SUPERVISED:
            dfield, report = solve_disparity(center, config=config, reference=truth)
        else:
            dfield, report = solve_disparity(center, coded, models, config=config)

        out = Path(spec.out)
        reconstructed = render_lf(center, dfield)
        save_lf(reconstructed, out / "lf")
        save_disparity(dfield, out / "disparity")
        # wall-clock time goes to stdout only so the report file is reproducible
        save_report(report.model_copy(update={"wall_clock_s": None}), out / "solve_report.json")

        summary = {
            "command": "reconstruct",
            "scheme": scheme.value,
            "center_source": estimator.name,
            "out": str(out),
            "loss": report.final.model_dump(),
            "iterations": report.iterations,
            "sign_branch": report.sign_branch,
            "wall_clock_s": report.wall_clock_s,
        }

        if spec.pipeline:
            exclude = set(spec.excluded_offsets())
            if estimator.name in (CenterSource.ORACLE.value, CenterSource.GIVEN_FILE.value):
                exclude.add(CENTER)
            evaluation = evaluate_light_field(reconstructed, truth, exclude)
            save_report(evaluation, out / "eval_report.json")
            summary["evaluation"] = {
                "mean_psnr": evaluation.mean_psnr,
                "mean_ssim": evaluation.mean_ssim,
                "excluded": evaluation.excluded,
            }
            logger.info(f"📊 PSNR {evaluation.mean_psnr:.2f} dB, SSIM {evaluation.mean_ssim:.4f}")
        return summary

    # ------------------------------------------------------------------
    # evaluate / inspection

    def cmd_evaluate(self, spec: RunSpec) -> Dict[str, Any]:
        """Compare a test light field against a reference"""
        reference = load_lf(spec.lf)
        test = load_lf(spec.inp)
        exclude = set(spec.excluded_offsets())
        if set(reference.offsets()) <= exclude:
            raise CliUsageError("every view is excluded; nothing to evaluate")

        evaluation = evaluate_light_field(test, reference, exclude)
        summary = {
            "command": "evaluate",
            "mean_psnr": evaluation.mean_psnr,
            "mean_ssim": evaluation.mean_ssim,
            "mean_l1": evaluation.mean_l1,
            "excluded": evaluation.excluded,
        }
        if spec.out:
            save_report(evaluation, spec.out)
            summary["out"] = spec.out
        logger.info(f"📊 PSNR {evaluation.mean_psnr:.2f} dB, SSIM {evaluation.mean_ssim:.4f}")
        return summary

    def cmd_epi(self, spec: RunSpec) -> Dict[str, Any]:
        lf = load_lf(spec.lf)
        epi = extract_epi(lf, spec.params["axis"], spec.params["fixed"], spec.params["angular"])
        save_image(spec.out, epi.data)
        return {"command": "epi", "out": spec.out, "shape": list(epi.data.shape)}

    def cmd_shear(self, spec: RunSpec) -> Dict[str, Any]:
        lf = load_lf(spec.lf)
        save_lf(shear(lf, spec.params["s"]), spec.out)
        return {"command": "shear", "out": spec.out, "s": spec.params["s"]}

    def cmd_synth(self, spec: RunSpec) -> Dict[str, Any]:
        """Write a synthetic plane or two-plane light field with its true disparity"""
        size = spec.params["size"]
        angular = spec.params["angular"]
        texture = spec.params["texture"]
        if texture == "ramp":
            center = ramp_texture(size, size)
        elif texture == "multiscale":
            center = multiscale_texture(size, size, seed=spec.seed)
        else:
            center = smooth_texture(size, size, seed=spec.seed)

        d = spec.params["disparity"]
        d_back = spec.params.get("d_back")
        if d_back is None:
            scene = plane_scene(center, d, (angular, angular))
        else:
            scene = two_plane_scene(center, d, d_back, angular_shape=(angular, angular))

        out = Path(spec.out)
        save_lf(scene.lf, out / "lf")
        save_disparity(scene.dfield, out / "disparity")
        logger.info(f"🧪 Synthesized {scene.name} into {out}")
        return {"command": "synth", "scene": scene.name, "out": str(out)}

    # ------------------------------------------------------------------

    def build_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            description="Coded light-field simulation and reconstruction CLI",
            formatter_class=argparse.RawDescriptionHelpFormatter
        )
        subparsers = parser.add_subparsers(dest='command', help='Available commands', parser_class=_ArgumentParser)

        def common(sub):
            sub.add_argument('--seed', type=int, help='Seed (default: LFCODED_DEFAULT_SEED)')
            sub.add_argument('--dry-run', action='store_true', help='Print the resolved run settings and exit')

        schemes = [s.value for s in CliScheme]

        sim_parser = subparsers.add_parser('simulate', help='Simulate a coded capture')
        sim_parser.add_argument('--scheme', choices=schemes, help='Capture scheme')
        sim_parser.add_argument('--lf', help='Light-field directory to capture')
        sim_parser.add_argument('--out', help='Capture directory to write')
        sim_parser.add_argument('--shots', type=int, default=1, help='Coded-aperture shots (default: 1)')
        sim_parser.add_argument('--tile', type=int, default=15, help='CLF code tile size (default: 15)')
        sim_parser.add_argument('--shift-per-view', type=int, default=1, help='CLF code shift per view (default: 1)')
        common(sim_parser)

        rec_parser = subparsers.add_parser('reconstruct', help='Reconstruct a light field from a capture')
        rec_parser.add_argument('--scheme', choices=schemes, help='Capture scheme (default: from the capture)')
        rec_parser.add_argument('--in', dest='inp', help='Capture directory, or a coded image with --model')
        rec_parser.add_argument('--model', help='Coded model file for a single coded image')
        rec_parser.add_argument('--out', help='Output directory')
        rec_parser.add_argument('--lf', help='Ground-truth light field (oracle centerview, supervised mode, --pipeline)')
        rec_parser.add_argument('--config', help='Solver config JSON (default: LFCODED_SOLVER_CONFIG)')
        rec_parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                                help='Solver config override, repeatable')
        rec_parser.add_argument('--mode', choices=[m.value for m in SolverMode], help='Solver mode')
        rec_parser.add_argument('--center-source', choices=[c.value for c in CenterSource], help='Centerview source')
        rec_parser.add_argument('--center', help='Centerview image for --center-source given-file')
        rec_parser.add_argument('--pipeline', action='store_true', help='Also evaluate against --lf')
        rec_parser.add_argument('--exclude', action='append', default=[], metavar='QU,QV',
                                help='Extra view offset to exclude from evaluation, repeatable')
        common(rec_parser)

        eval_parser = subparsers.add_parser('evaluate', help='Compare a light field against a reference')
        eval_parser.add_argument('--lf', help='Reference light-field directory')
        eval_parser.add_argument('--in', dest='inp', help='Test light-field directory')
        eval_parser.add_argument('--out', help='Report file to write')
        eval_parser.add_argument('--exclude', action='append', default=[], metavar='QU,QV',
                                 help='View offset to exclude, repeatable')
        common(eval_parser)

        epi_parser = subparsers.add_parser('epi', help='Extract an epipolar-plane image')
        epi_parser.add_argument('--lf', help='Light-field directory')
        epi_parser.add_argument('--out', help='Image file (.png or .pfm)')
        epi_parser.add_argument('--axis', choices=['x', 'y'], default='x', help='Spatial axis of the EPI (default: x)')
        epi_parser.add_argument('--fixed', type=int, default=0, help='Fixed image row (axis x) or column (axis y)')
        epi_parser.add_argument('--angular', type=int, default=0, help='Fixed angular offset (default: 0)')
        common(epi_parser)

        shear_parser = subparsers.add_parser('shear', help='Refocus a light field by shearing')
        shear_parser.add_argument('--lf', help='Light-field directory')
        shear_parser.add_argument('--out', help='Output light-field directory')
        shear_parser.add_argument('--s', type=float, required=True, help='Shear amount in pixels per view')
        common(shear_parser)

        synth_parser = subparsers.add_parser('synth', help='Write a synthetic light field')
        synth_parser.add_argument('--out', help='Output directory (lf/ and disparity/ are created inside)')
        synth_parser.add_argument('--disparity', type=float, default=1.0, help='Plane (or front) disparity')
        synth_parser.add_argument('--d-back', type=float, help='Background disparity; makes a two-plane scene')
        synth_parser.add_argument('--size', type=int, default=64, help='Image size in pixels (default: 64)')
        synth_parser.add_argument('--angular', type=int, default=7, help='Views per angular axis (default: 7)')
        synth_parser.add_argument('--texture', choices=['smooth', 'multiscale', 'ramp'], default='smooth')
        common(synth_parser)

        return parser

    def build_spec(self, args: argparse.Namespace) -> RunSpec:
        seed = args.seed if args.seed is not None else self.settings.default_seed
        params: Dict[str, Any] = {}
        if args.command == 'simulate':
            params = {"tile": args.tile, "shift_per_view": args.shift_per_view}
        elif args.command == 'epi':
            params = {"axis": args.axis, "fixed": args.fixed, "angular": args.angular}
        elif args.command == 'shear':
            params = {"s": args.s}
        elif args.command == 'synth':
            params = {
                "disparity": args.disparity, "d_back": args.d_back,
                "size": args.size, "angular": args.angular, "texture": args.texture,
            }

        overrides = dict(parse_override(text) for text in getattr(args, 'overrides', []))
        return RunSpec(
            subcommand=args.command,
            scheme=getattr(args, 'scheme', None),
            lf=getattr(args, 'lf', None),
            inp=getattr(args, 'inp', None),
            out=getattr(args, 'out', None),
            model=getattr(args, 'model', None),
            config=getattr(args, 'config', None),
            seed=seed,
            center_source=getattr(args, 'center_source', None),
            center=getattr(args, 'center', None),
            exclude=getattr(args, 'exclude', []),
            dry_run=args.dry_run,
            pipeline=getattr(args, 'pipeline', False),
            shots=getattr(args, 'shots', 1),
            mode=getattr(args, 'mode', None),
            overrides=overrides,
            params=params,
        )

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Main CLI entry point"""
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
            if not args.command:
                parser.print_help(sys.stderr)
                return ExitCode.USAGE
            spec = self.build_spec(args)
        except (CliUsageError, ValidationError, LightFieldError) as e:
            _emit_error(e, ExitCode.USAGE)
            return ExitCode.USAGE

        if spec.dry_run:
            print(spec.model_dump_json())
            return ExitCode.OK

        started = time.perf_counter()
        try:
            if spec.subcommand == 'simulate':
                summary = self.cmd_simulate(spec)
            elif spec.subcommand == 'reconstruct':
                summary = self.cmd_reconstruct(spec)
            elif spec.subcommand == 'evaluate':
                summary = self.cmd_evaluate(spec)
            elif spec.subcommand == 'epi':
                summary = self.cmd_epi(spec)
            elif spec.subcommand == 'shear':
                summary = self.cmd_shear(spec)
            elif spec.subcommand == 'synth':
                summary = self.cmd_synth(spec)
            else:
                raise CliUsageError(f"unknown command: {spec.subcommand}")

        except KeyboardInterrupt:
            logger.warning("⚠️ Operation cancelled by user")
            return 130
        except CliUsageError as e:
            _emit_error(e, ExitCode.USAGE)
            return ExitCode.USAGE
        except SolverDivergenceError as e:
            logger.error(f"❌ {e}")
            _emit_error(e, ExitCode.DIVERGENCE)
            return ExitCode.DIVERGENCE
        except (LightFieldIOError, OSError) as e:
            logger.error(f"❌ {e}")
            _emit_error(e, ExitCode.IO)
            return ExitCode.IO
        except LightFieldError as e:
            logger.error(f"❌ {e}")
            _emit_error(e, ExitCode.VALIDATION)
            return ExitCode.VALIDATION
        except Exception as e:
            logger.exception(f"❌ Unexpected error: {e}")
            _emit_error(e, ExitCode.FAILURE)
            return ExitCode.FAILURE

        logger.debug(f"⏱️ {spec.subcommand} took {time.perf_counter() - started:.2f}s")
        _emit(summary)
        return ExitCode.OK


if __name__ == "__main__":
    cli = LightFieldCLI()
    sys.exit(cli.run())
