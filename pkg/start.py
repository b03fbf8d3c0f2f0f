"""
Command-line launcher for the open-office HVAC DQN simulator
Train, evaluate and sweep the DQN controller against the rule-based schedule
"""

import argparse
import logging
import sys
from pathlib import Path

DEFAULT_CONFIG = Path(__file__).resolve().parent / 'configs' / 'run_default.json'


def check_dependencies():
    """Check if all required dependencies are installed"""
    required_packages = [
        'numpy',
        'pandas',
        'scipy',
        'matplotlib',
    ]

    missing = []
    for package in required_packages:
        try:
            __import__(package)
        except ImportError:
            missing.append(package)

    if missing:
        print("❌ Missing dependencies:")
        for pkg in missing:
            print(f"   - {pkg}")
        print("\n💡 Install all dependencies with:")
        print("   pip install -r requirements.txt")
        return False
    return True


# ══════════════════════════════════════════════════════════════════════
# ARGUMENTS
# ══════════════════════════════════════════════════════════════════════

def _add_run_options(p: argparse.ArgumentParser):
    p.add_argument('--config', type=Path, default=DEFAULT_CONFIG, help='run config JSON')
    p.add_argument('--out-dir', type=Path, help='output directory')
    p.add_argument('--seed', type=int)
    p.add_argument('--weather', help='weather profile name or CSV path')
    p.add_argument('--weather-seed', type=int)
    p.add_argument('--step-minutes', type=int)
    p.add_argument('--duration-days', type=int)
    p.add_argument('--reward-mode', choices=['heuristic', 'binary'])
    p.add_argument('--max-substep-s', type=float)

    eta = p.add_argument_group('reward weights')
    eta.add_argument('--eta-t', type=float)
    eta.add_argument('--eta-e', type=float)
    eta.add_argument('--eta-s', type=float)

    hyper = p.add_argument_group('DQN hyperparameters')
    hyper.add_argument('--epochs', type=int)
    hyper.add_argument('--lr', type=float)
    hyper.add_argument('--gamma', type=float)
    hyper.add_argument('--epsilon', type=float)
    hyper.add_argument('--batch-size', type=int)
    hyper.add_argument('--buffer-size', type=int)
    hyper.add_argument('--minimal-size', type=int)
    hyper.add_argument('--target-update', type=int)

    p.add_argument('--plot', action='store_true', help='render PNG charts next to the CSV output')
    p.add_argument('-v', '--verbose', action='store_true')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='start.py', description='Open-office HVAC DQN simulator')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('train', help='train a DQN controller')
    _add_run_options(p)

    p = sub.add_parser('eval', help='evaluate a policy')
    _add_run_options(p)
    p.add_argument('--policy', default='dqn', choices=['dqn', 'rbc', 'always_on', 'always_off'])
    p.add_argument('--weights', type=Path, help='weights.npz of a trained run')
    p.add_argument('--compare', action='store_true', help='also run RBC and report the saving')

    p = sub.add_parser('sweep', help='energy-comfort or smoothness sweep')
    _add_run_options(p)
    p.add_argument('--axis', default='eta_ratio', choices=['eta_ratio', 'eta_s'])
    p.add_argument('--repeats', type=int, default=1)
    p.add_argument('--workers', type=int, default=1)

    p = sub.add_parser('compare-plans', help='open vs closed plan under one policy')
    _add_run_options(p)
    p.add_argument('--open', type=Path, required=True, help='open-plan building config')
    p.add_argument('--closed', type=Path, required=True, help='closed-plan building config')
    p.add_argument('--policy', default='rbc', choices=['dqn', 'rbc', 'always_on', 'always_off'])
    p.add_argument('--weights', type=Path)

    p = sub.add_parser('weather-gen', help='write a synthetic weather CSV')
    _add_run_options(p)
    p.add_argument('--output', type=Path, required=True)

    p = sub.add_parser('climates', help='train and evaluate per climate profile')
    _add_run_options(p)
    p.add_argument('--profiles', nargs='+')

    p = sub.add_parser('ablation', help='heuristic vs binary reward convergence')
    _add_run_options(p)
    p.add_argument('--seeds', type=int, nargs='+', default=[0, 1, 2])

    return parser


OVERRIDE_FIELDS = (
    'out_dir', 'seed', 'weather', 'weather_seed', 'step_minutes', 'duration_days', 'reward_mode',
    'max_substep_s', 'eta_t', 'eta_e', 'eta_s', 'epochs', 'lr', 'gamma', 'epsilon', 'batch_size',
    'buffer_size', 'minimal_size', 'target_update',
)


def load_config(args):
    from src.data_loader import load_run_config
    from src.weather import PROFILES

    config = load_run_config(args.config)
    overrides = {name: getattr(args, name) for name in OVERRIDE_FIELDS}
    if overrides['weather'] and overrides['weather'] not in PROFILES:
        overrides['weather'] = str(Path(overrides['weather']).resolve())
    return config.with_overrides(**overrides)


# ══════════════════════════════════════════════════════════════════════
# COMMANDS
# ══════════════════════════════════════════════════════════════════════

def cmd_train(args, config):
    from src import harness, plots

    building = harness.load_building(config)
    weather, _ = harness.build_weather(config)
    result = harness.run_training(config, building, weather)
    logs, summaries = harness.compare_policies(config, result.net, building=building, weather=weather)
    harness.write_run_outputs(config.out_dir, logs, summaries)
    if args.plot:
        plots.plot_training_curve(result.curve, config.out_dir / 'training_curve.png')
        plots.plot_week(result.logs[-1], config.out_dir / 'last_epoch_week.png', building.bands.comfort_band_f())
    for row in summaries.to_dict('records'):
        print(harness.format_summary(row))


def cmd_eval(args, config):
    import pandas as pd
    from src import harness, plots

    if args.compare:
        policies = tuple(dict.fromkeys((args.policy, 'rbc')))
        logs, summaries = harness.compare_policies(config, args.weights, policies=policies)
    else:
        log, summary = harness.run_eval(config, args.policy, args.weights)
        logs, summaries = {args.policy: log}, pd.DataFrame([summary])
    harness.write_run_outputs(config.out_dir, logs, summaries)
    if args.plot:
        plots.plot_week(logs[args.policy], config.out_dir / f'eval_{args.policy}_week.png')
    for row in summaries.to_dict('records'):
        print(harness.format_summary(row))


def cmd_sweep(args, config):
    from src import harness, plots

    spec = harness.SweepSpec(axis=args.axis, repeats=args.repeats)
    table = harness.run_sweep(spec, config, workers=args.workers)
    summary = harness.summarize_sweep(table)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(config.out_dir / f'sweep_{args.axis}.csv', index=False)
    summary.to_csv(config.out_dir / f'sweep_{args.axis}_summary.csv', index=False)
    if args.plot and len(summary):
        plots.plot_sweep(summary, config.out_dir / f'sweep_{args.axis}.png')
    print(summary.to_string(index=False))
    failed = int((table['error'] != '').sum())
    if failed:
        print(f"⚠️  {failed} run(s) failed, see the error column")


def cmd_compare_plans(args, config):
    from src import harness
    from src.data_loader import load_building_config

    table = harness.compare_plans(load_building_config(args.open), load_building_config(args.closed),
                                  config, args.policy, args.weights)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(config.out_dir / 'compare_plans.csv', index=False)
    print(table.to_string(index=False))


def cmd_weather_gen(args, config):
    from src.data_loader import write_weather_csv
    from src.harness import build_weather

    series, _ = build_weather(config)
    path = write_weather_csv(series, args.output)
    print(f"✅ Wrote {len(series)} weather rows to {path}")


def cmd_climates(args, config):
    from src import harness

    table = harness.run_climates(config, args.profiles)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(config.out_dir / 'climates.csv', index=False)
    print(table.to_string(index=False))


def cmd_ablation(args, config):
    from src import harness, plots

    table, curves = harness.run_ablation(config, args.seeds)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(config.out_dir / 'ablation.csv', index=False)
    curves.to_csv(config.out_dir / 'ablation_curves.csv', index=False)
    if args.plot:
        plots.plot_ablation(curves, config.out_dir / 'ablation.png')
    print(table.to_string(index=False))
    print(f"heuristic converges first on a majority of seeds: {harness.heuristic_converges_first(table)}")


COMMANDS = {
    'train': cmd_train,
    'eval': cmd_eval,
    'sweep': cmd_sweep,
    'compare-plans': cmd_compare_plans,
    'weather-gen': cmd_weather_gen,
    'climates': cmd_climates,
    'ablation': cmd_ablation,
}


def main(argv=None) -> int:
    """Parse arguments, run one subcommand and return the exit status"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    print("=" * 60)
    print(f"🏢 Open-office HVAC DQN simulator: {args.command}")
    print("=" * 60)

    if not check_dependencies():
        return 1

    from src.errors import HvacSimError

    try:
        config = load_config(args)
        COMMANDS[args.command](args, config)
    except HvacSimError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\n\n👋 Interrupted")
        return 130

    print(f"📁 Output: {config.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
