/** Training hyperparameters (defaults follow the published table). */

export interface AgentConfig {
  gamma: number;
  gaeLambda: number;
  clip: number;
  iterations: number;
  rolloutLength: number;
  batchSize: number;
  epochsPerIteration: number;
  encoderLayers: number;
  attentionHeads: number;
  embedDim: number;
  mlpHidden: number;
  initialLr: number;
  endLr: number;
  lrDecaySteps: number;
  valueLossCoef: number;
  seed: number;
}

export const DEFAULT_AGENT: AgentConfig = {
  gamma: 0.99,
  gaeLambda: 0.97,
  clip: 0.2,
  iterations: 500,
  rolloutLength: 50_000,
  batchSize: 100,
  epochsPerIteration: 10,
  encoderLayers: 2,
  attentionHeads: 8,
  embedDim: 64,
  mlpHidden: 64,
  initialLr: 1e-4,
  endLr: 1e-5,
  lrDecaySteps: 1_000_000,
  valueLossCoef: 0.5,
  seed: 1,
};

export function validateConfig(config: AgentConfig): void {
  const positive: (keyof AgentConfig)[] = [
    "gamma", "gaeLambda", "clip", "iterations", "rolloutLength", "batchSize",
    "epochsPerIteration", "encoderLayers", "attentionHeads", "embedDim",
    "mlpHidden", "initialLr", "endLr", "lrDecaySteps",
  ];
  for (const key of positive) {
    if (!(Number(config[key]) > 0)) {
      throw new Error(`config.${key} must be positive`);
    }
  }
  if (config.endLr > config.initialLr) {
    throw new Error("learning-rate schedule must be non-increasing");
  }
}

/** Linear decay from initialLr to endLr across lrDecaySteps env steps. */
export function learningRate(config: AgentConfig, envSteps: number): number {
  const progress = Math.min(1, envSteps / config.lrDecaySteps);
  return config.initialLr + (config.endLr - config.initialLr) * progress;
}
