/** Loss configuration mirrored from the service. */

export interface LossConfig {
  variant?: "dct" | "fft";
  scales?: number;
  lambda?: number;
  includeL1?: boolean;
}

export interface WireConfig {
  variant: string;
  scales: number;
  lambda: number;
  include_l1: boolean;
}

export function toWireConfig(config: LossConfig = {}): WireConfig {
  return {
    variant: config.variant ?? "dct",
    scales: config.scales ?? 3,
    lambda: config.lambda ?? 1.0,
    include_l1: config.includeL1 ?? true,
  };
}
