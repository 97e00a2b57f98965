#!/usr/bin/env python3
"""Shared runner for the script-style test files"""

import argparse
import os
import sys
import traceback
from typing import Callable, List, Optional, Sequence, Tuple

DEFAULT_SEED = 1729


def resolve_seed(argv: Optional[Sequence[str]] = None) -> int:
    """--seed N on the command line, else HURWITZ_TEST_SEED, else 1729"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--seed', type=int, default=None)
    args, _ = parser.parse_known_args(sys.argv[1:] if argv is None else argv)
    if args.seed is not None:
        return args.seed
    return int(os.getenv("HURWITZ_TEST_SEED", DEFAULT_SEED))


def run_suite(title: str, tests: List[Tuple[str, Callable[[], bool]]]) -> bool:
    print("=" * 60)
    print(f"🧪 {title} - Test Suite")
    print("=" * 60)

    results = []
    for test_name, test_func in tests:
        try:
            result = test_func()
            results.append((test_name, result))
        except Exception as e:
            print(f"\n   ✗ {test_name} failed with error: {e}")
            traceback.print_exc()
            results.append((test_name, False))

    print("\n" + "=" * 60)
    print("📊 Test Summary")
    print("=" * 60)

    passed = sum(1 for _, result in results if result)
    total = len(results)
    for test_name, result in results:
        status = "✓ PASS" if result else "✗ FAIL"
        print(f"{status} - {test_name}")

    print("-" * 60)
    print(f"Results: {passed}/{total} tests passed")
    print("=" * 60)
    return all(result for _, result in results)
