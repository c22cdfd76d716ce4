"""
this module contains the command-line interface of waiterplan.
it parses arguments into a Config, loads the scenario and runs one of the
plan, verify, bounds and reach commands.

Exit codes:
    0  success (plan: goal reached; verify: no violations)
    1  error (unreadable or invalid input, failed simulation, interrupt)
    2  plan ended in a safe stop or at the iteration cap; also argparse usage errors
    3  verify found violations
"""

from dataclasses import replace
from pathlib import Path
import argparse
import logging
import math
import sys

import numpy as np

from .config import DEFAULT_DT_SIM, Config
from .planner import IterationRecord, Outcome, Scenario, interval_reach, receding_horizon
from .rendering import PlanLogWriter, ReportWriter, TraceCsvWriter, read_plan_log
from .scenario import DEFAULT_SCENARIO, bundled_scenario_path, load_scenario, scenario_digest
from .setops import pz_bounds, save_dump
from .traj import InitialCondition
from .verify import audit_report, closed_loop_sim, containment_audit, report_exit_code, segment_audit

COMMANDS = ("plan", "verify", "bounds", "reach")
DEFAULT_LOG = Path("plan.jsonl")


class WaiterPlanCLI:
    """
    Parses arguments and runs one command against one scenario.

    Every command loads the scenario the same way, applies the overrides
    given on the command line and reports progress with print; results
    go to files through the rendering writers.
    """

    @staticmethod
    def main(args: list = None):
        """
        Main entry point for the waiterplan CLI.

        Args:
            args: Command-line arguments (defaults to sys.argv).
        """
        if args is None:
            args = sys.argv[1:]

        parser = WaiterPlanCLI._create_parser()
        parsed_args = parser.parse_args(args)

        if parsed_args.samples is not None and parsed_args.samples < 1:
            parser.error(f"--samples must be at least 1, got {parsed_args.samples}")
        if parsed_args.dt is not None and parsed_args.dt <= 0:
            parser.error(f"--dt must be positive, got {parsed_args.dt}")
        if parsed_args.dt_sim <= 0:
            parser.error(f"--dt-sim must be positive, got {parsed_args.dt_sim}")
        if parsed_args.max_iters is not None and parsed_args.max_iters < 1:
            parser.error(f"--max-iters must be at least 1, got {parsed_args.max_iters}")

        scenario_path = (Path(parsed_args.scenario) if parsed_args.scenario
                         else bundled_scenario_path(DEFAULT_SCENARIO))
        config = Config(
            scenario_path=scenario_path,
            log_path=Path(parsed_args.log) if parsed_args.log else None,
            seed=parsed_args.seed,
            samples=parsed_args.samples,
            interval=parsed_args.interval,
            containment=parsed_args.containment,
            dump_path=Path(parsed_args.dump_reach) if parsed_args.dump_reach else None,
            max_iterations=parsed_args.max_iters,
            dt=parsed_args.dt,
            dt_sim=parsed_args.dt_sim,
            quiet=parsed_args.quiet,
            csv_path=Path(parsed_args.csv) if parsed_args.csv else None,
            report_path=Path(parsed_args.report) if parsed_args.report else None,
        )

        logging.basicConfig(
            level=logging.WARNING if config.quiet else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )

        try:
            code = WaiterPlanCLI.run(parsed_args.command, config)
        except KeyboardInterrupt:
            print("\nInterrupted by user", file=sys.stderr)
            sys.exit(1)
        except Exception as e:
            print(f"Error: {e}", file=sys.stderr)
            sys.exit(1)
        sys.exit(code)

    @staticmethod
    def run(command: str, config: Config) -> int:
        """
        Execute one command.

        Args:
            command: One of COMMANDS.
            config: Run options.

        Returns:
            The process exit code.
        """
        handlers = {
            "plan": WaiterPlanCLI.cmd_plan,
            "verify": WaiterPlanCLI.cmd_verify,
            "bounds": WaiterPlanCLI.cmd_bounds,
            "reach": WaiterPlanCLI.cmd_reach,
        }
        if command not in handlers:
            raise ValueError(f"Unsupported command: {command}")
        return handlers[command](config)

    @staticmethod
    def _say(config: Config, message: str):
        if not config.quiet:
            print(message)

    @staticmethod
    def _load(config: Config) -> Scenario:
        """Load the scenario and apply the command-line overrides."""
        WaiterPlanCLI._say(config, f"Loading scenario: {config.scenario_path}")
        scn = load_scenario(config.scenario_path)
        changes = {}
        if config.seed is not None:
            changes.update(seed=config.seed, solver=replace(scn.solver, seed=config.seed))
        if config.dt is not None:
            changes.update(dt=config.dt)
        return scn.with_changes(**changes) if changes else scn

    @staticmethod
    def cmd_plan(config: Config) -> int:
        """Run the receding-horizon planner and write the plan log."""
        scn = WaiterPlanCLI._load(config)
        log_path = config.log_path or DEFAULT_LOG

        def progress(record: IterationRecord):
            result = record.result
            WaiterPlanCLI._say(
                config,
                f"  iteration {record.index}: {result.status.value}, cost {result.cost:.4g}, "
                f"{record.n_constraints} constraints, solve {result.solve_time:.2f} s"
                + (" (over budget)" if result.overrun else ""),
            )

        WaiterPlanCLI._say(config, f"Planning from {list(scn.start)} to {list(scn.goal)}...")
        log = receding_horizon(scn, config.max_iterations, on_iteration=progress)

        writer = PlanLogWriter(scenario_digest(config.scenario_path), scn.seed)
        log_path = writer.write(log, log_path)

        if log.outcome == Outcome.GOAL_REACHED:
            WaiterPlanCLI._say(config, f"✓ Goal reached after {len(log.records)} iterations")
        elif log.outcome == Outcome.SAFE_STOP:
            WaiterPlanCLI._say(config, f"⚠️  No certified plan at iteration {log.records[-1].index}; "
                                       f"braked to a safe stop")
        else:
            WaiterPlanCLI._say(config, f"⚠️  Iteration cap of {len(log.records)} reached; braked to a stop")
        WaiterPlanCLI._say(config, f"✓ Plan log saved to: {log_path}")
        return log.exit_code

    @staticmethod
    def cmd_verify(config: Config) -> int:
        """Audit the committed segments of a plan log and simulate them in closed loop."""
        scn = WaiterPlanCLI._load(config)
        log_path = PlanLogWriter.target(config.log_path or DEFAULT_LOG)
        seed = scn.seed
        samples = config.samples if config.samples is not None else scn.verify_samples
        plan = read_plan_log(log_path, scenario_digest(config.scenario_path))
        segments = plan.segments
        WaiterPlanCLI._say(config, f"Verifying {len(segments)} committed segments from {log_path}")

        reports = []
        if not segments:
            WaiterPlanCLI._say(config, "⚠️  The plan log commits no motion; nothing to simulate")
        else:
            per_segment = max(1, math.ceil(samples / len(segments)))
            audit = segment_audit(scn, segments, per_segment, seed)
            reports.append(audit)
            if any(v.check == "parameter_box" for v in audit.violations):
                WaiterPlanCLI._say(config, "⚠️  Segment parameters outside [-1, 1]; skipping the closed-loop simulation")
            else:
                trace, simulated = closed_loop_sim(scn, segments, dt_sim=config.dt_sim, seed=seed)
                reports.append(simulated)
                if config.csv_path is not None:
                    csv_path = TraceCsvWriter().write(trace, config.csv_path)
                    WaiterPlanCLI._say(config, f"✓ Simulation trace saved to: {csv_path}")
        if config.containment:
            reports.append(containment_audit(scn, samples, seed))

        if reports:
            print(audit_report(reports))
        if config.report_path is not None:
            report_path = ReportWriter().write(reports, config.report_path)
            WaiterPlanCLI._say(config, f"✓ Report saved to: {report_path}")
        code = report_exit_code(reports)
        if code == 0:
            WaiterPlanCLI._say(config, "✓ No violations detected")
        else:
            WaiterPlanCLI._say(config, f"⚠️  {sum(r.n_violations for r in reports)} violations detected")
        return code

    @staticmethod
    def cmd_bounds(config: Config) -> int:
        """Print the controller's ultimate bounds and the eigenvalue bounds they use."""
        scn = WaiterPlanCLI._load(config)
        cfg = scn.controller
        bounds = scn.tracking
        print(f"|r| bound eps : {bounds.eps:.4f}")
        print(f"eps_p (rad)   : {' '.join(f'{v:.4f}' for v in bounds.eps_p)}")
        print(f"eps_v (rad/s) : {' '.join(f'{v:.4f}' for v in bounds.eps_v)}")
        print(f"sigma_m       : {cfg.sigma_m:.4f}")
        print(f"sigma_M       : {cfg.sigma_M:.4f}")
        if scn.sigma_samples:
            print(f"estimated from {scn.sigma_samples} sampled configurations")
        return 0

    @staticmethod
    def cmd_reach(config: Config) -> int:
        """Build one subinterval's reachable sets from the start and optionally dump them."""
        scn = WaiterPlanCLI._load(config)
        i = config.interval
        reach = interval_reach(scn, InitialCondition.at_rest(scn.start), i, obstacles=[])
        force, moment = reach.wrenches.contact
        entries = {f"fo_{link}": fo for link, fo in enumerate(reach.occupancy)}
        entries.update(force=force, moment=moment, torque=reach.torque,
                       sep=reach.contact.sep, slip=reach.contact.slip, tip=reach.contact.tip)

        lo, hi = scn.partition.bounds(i)
        print(f"interval {i}: t in [{lo:.4f}, {hi:.4f}]")
        for name, pz in entries.items():
            b = pz_bounds(pz)
            print(f"  {name:<8} lo {np.round(b.lo, 5).tolist()} hi {np.round(b.hi, 5).tolist()}")
        if config.dump_path is not None:
            config.dump_path.parent.mkdir(parents=True, exist_ok=True)
            save_dump(config.dump_path, entries)
            WaiterPlanCLI._say(config, f"✓ Reachable sets saved to: {config.dump_path}")
        return 0

    @staticmethod
    def _create_parser() -> argparse.ArgumentParser:
        """
        Create and configure the argument parser.

        Returns:
            Configured ArgumentParser instance.
        """
        parser = argparse.ArgumentParser(
            prog='waiterplan',
            description='Plan and verify arm motions that carry an unsecured object on a tray',
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  %(prog)s plan scenario.json --log plan.jsonl
  %(prog)s verify scenario.json --log plan.jsonl --samples 10000 --csv trace.csv
  %(prog)s bounds scenario.json
  %(prog)s reach scenario.json --interval 3 --dump-reach reach.wpz
  %(prog)s plan            # the bundled desk tray scenario
            """
        )

        parser.add_argument(
            'command',
            choices=COMMANDS,
            help='What to run'
        )

        parser.add_argument(
            'scenario',
            nargs='?',
            help=f'Scenario JSON file (default: the bundled {DEFAULT_SCENARIO} scenario)'
        )

        parser.add_argument(
            '--log',
            help=f'Plan log written by plan and read by verify; .jsonl is appended to a name without extension (default: {DEFAULT_LOG})',
            default=None
        )

        parser.add_argument(
            '--seed',
            type=int,
            help="Seed for the solver and every sampler (default: the scenario's)",
            default=None
        )

        parser.add_argument(
            '--samples',
            type=int,
            help="Verification sample count (default: the scenario's)",
            default=None
        )

        parser.add_argument(
            '--max-iters',
            type=int,
            help="Planning iteration cap (default: the scenario's)",
            default=None
        )

        parser.add_argument(
            '--dt',
            type=float,
            help="Time partition step in seconds (default: the scenario's)",
            default=None
        )

        parser.add_argument(
            '--dt-sim',
            type=float,
            help=f'Closed-loop simulation step in seconds (default: {DEFAULT_DT_SIM})',
            default=DEFAULT_DT_SIM
        )

        parser.add_argument(
            '--interval',
            type=int,
            help='Subinterval whose reachable sets reach prints (default: 0)',
            default=0
        )

        parser.add_argument(
            '--dump-reach',
            help='Write the reach command\'s sets to this WPZ1 file',
            default=None
        )

        parser.add_argument(
            '--csv',
            help='Write the closed-loop time series of verify to this CSV file',
            default=None
        )

        parser.add_argument(
            '--report',
            help='Write the verification summary of verify to this text file',
            default=None
        )

        parser.add_argument(
            '--containment',
            action='store_true',
            help='Also run the reachable-set containment audit during verify'
        )

        parser.add_argument(
            '--quiet',
            action='store_true',
            help='Only print results, warnings and errors'
        )

        return parser


# Entry point for running as a script
if __name__ == '__main__':
    WaiterPlanCLI.main()
