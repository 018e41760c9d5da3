/**
 * Minimal training loop using the frequency loss as a custom objective.
 *
 * A 16x16 prediction starts as a darkened copy of the target; plain gradient
 * descent through the service's /v1/gradient endpoint recovers it. This is a
 * shape/gradient demonstration, not a performance benchmark.
 *
 * Run against a live service:  freqloss serve --port 8321   then
 *   npm run demo               (override with FREQLOSS_URL)
 */

import { FrequencyLossClient, ImageTensor, LossConfig } from "../src/index.js";

const SIZE = 16;

function makeTarget(): Float64Array {
  // Deterministic pattern: smooth waves plus one sharp bright square.
  const data = new Float64Array(SIZE * SIZE);
  for (let y = 0; y < SIZE; y++) {
    for (let x = 0; x < SIZE; x++) {
      let v =
        0.5 +
        0.25 * Math.sin((2 * Math.PI * x) / SIZE) * Math.cos((2 * Math.PI * y) / SIZE);
      if (x >= 4 && x < 8 && y >= 9 && y < 13) v += 0.3;
      data[y * SIZE + x] = Math.min(0.95, Math.max(0.05, v));
    }
  }
  return data;
}

export interface DemoSummary {
  initialLoss: number;
  finalLoss: number;
  iterations: number;
  maxAbsError: number;
}

export async function runTrainingDemo(
  baseUrl: string,
  iterations = 300,
  learningRate = 1.0,
): Promise<DemoSummary> {
  const client = new FrequencyLossClient(baseUrl);
  const targetData = makeTarget();
  const predData = targetData.map((v) => 0.35 * v) as Float64Array;
  const shape = { height: SIZE, width: SIZE, channels: 1 } as const;
  const target: ImageTensor = { ...shape, data: targetData };
  const config: LossConfig = { variant: "fft", scales: 2, lambda: 1 / SIZE };

  let initialLoss = Number.NaN;
  let finalLoss = Number.NaN;
  for (let step = 0; step < iterations; step++) {
    const pred: ImageTensor = { ...shape, data: predData };
    const { result, grad } = await client.gradient(pred, target, config);
    if (step === 0) initialLoss = result.total;
    finalLoss = result.total;
    for (let i = 0; i < predData.length; i++) {
      predData[i] -= learningRate * grad[i];
    }
    if (step % 50 === 0) {
      console.log(`step ${String(step).padStart(3)}  loss ${result.total.toFixed(6)}`);
    }
  }
  let maxAbsError = 0;
  for (let i = 0; i < predData.length; i++) {
    maxAbsError = Math.max(maxAbsError, Math.abs(predData[i] - targetData[i]));
  }
  return { initialLoss, finalLoss, iterations, maxAbsError };
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (invokedDirectly) {
  const baseUrl = process.env.FREQLOSS_URL ?? "http://127.0.0.1:8321";
  runTrainingDemo(baseUrl)
    .then((summary) => {
      console.log(
        `done: loss ${summary.initialLoss.toFixed(6)} -> ${summary.finalLoss.toFixed(6)}, ` +
          `max abs pixel error ${summary.maxAbsError.toFixed(6)}`,
      );
    })
    .catch((err) => {
      console.error(`demo failed: ${err}`);
      process.exit(1);
    });
}
