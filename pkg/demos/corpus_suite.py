"""Run one theorem suite over a small corpus and print the tally.

The command line equivalent is

    centerlab verify --suite thm34 --trials 10 --dim-max 8
"""

from centerlab.suites import SuiteOptions, run_suite

report = run_suite("thm34", SuiteOptions(trials=10, dim_max=8, seed=7))
print(report.summary())
print("exit code:", report.exit_code())
