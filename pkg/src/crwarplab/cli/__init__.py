from crwarplab.cli.scenario import Scenario, load_scenario, parse_scenario, run_lemma_suite, run_scenario

__all__ = ["Scenario", "load_scenario", "parse_scenario", "run_lemma_suite", "run_scenario"]
