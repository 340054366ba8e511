from .config import ConfigError, ExperimentConfig, load_config, parse_config_text
from .runner import AggregateResult, run_experiment, run_phenotype_demo, run_replicate, simulate
