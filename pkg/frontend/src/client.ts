/**
 * HTTP client for the freqloss service's buffer endpoints.
 *
 * Numeric status contract (mirrors the service): 0 ok, 1 shape/buffer
 * mismatch, 2 bad config, 3 dimensions not pyramid compatible. Non-ok
 * statuses surface as ServiceStatusError.
 */

import {
  BufferPayload,
  ImageTensor,
  base64ToFloat64,
  toBufferPayload,
} from "./buffers.js";
import { LossConfig, toWireConfig } from "./config.js";

export interface ScaleEntry {
  scale: number;
  per_channel: number[];
}

export interface LossResult {
  total: number;
  l1_term: number;
  freq_term: number;
  lambda: number;
  per_scale: ScaleEntry[];
}

export interface GradientResult {
  result: LossResult;
  /** d(total)/d(pred), planar layout, same shape as pred. */
  grad: Float64Array;
  /** Raw wire payload of the gradient (useful for bitwise comparisons). */
  gradPayload: BufferPayload;
}

export class ServiceStatusError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ServiceStatusError";
  }
}

interface WireLossResponse {
  status: number;
  result: {
    total: number;
    l1_term: number;
    freq_term: number;
    lambda: number;
    per_scale: ScaleEntry[];
  };
  grad?: BufferPayload;
}

export class FrequencyLossClient {
  constructor(readonly baseUrl: string) {}

  private async post(path: string, body: unknown): Promise<WireLossResponse> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      const status = typeof payload.status === "number" ? payload.status : -1;
      const message =
        typeof payload.error === "string"
          ? payload.error
          : `service returned HTTP ${resp.status}`;
      throw new ServiceStatusError(status, message);
    }
    return payload as unknown as WireLossResponse;
  }

  async health(): Promise<{ status: string; name: string; version: string }> {
    const resp = await fetch(`${this.baseUrl}/v1/health`);
    if (!resp.ok) {
      throw new ServiceStatusError(-1, `health check failed: HTTP ${resp.status}`);
    }
    return (await resp.json()) as { status: string; name: string; version: string };
  }

  /** Combined loss (L1 + lambda * multi-scale frequency term). */
  async loss(
    pred: ImageTensor,
    target: ImageTensor,
    config: LossConfig = {},
  ): Promise<LossResult> {
    const body = {
      pred: toBufferPayload(pred),
      target: toBufferPayload(target),
      config: toWireConfig(config),
    };
    const wire = await this.post("/v1/loss", body);
    return { ...wire.result };
  }

  /** Loss plus its exact gradient with respect to pred. */
  async gradient(
    pred: ImageTensor,
    target: ImageTensor,
    config: LossConfig = {},
  ): Promise<GradientResult> {
    const body = {
      pred: toBufferPayload(pred),
      target: toBufferPayload(target),
      config: toWireConfig(config),
    };
    const wire = await this.post("/v1/gradient", body);
    const gradPayload = wire.grad as BufferPayload;
    return {
      result: { ...wire.result },
      grad: base64ToFloat64(gradPayload.data_b64),
      gradPayload,
    };
  }
}
