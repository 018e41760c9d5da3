export {
  BufferFormatError,
  BufferPayload,
  ImageTensor,
  Layout,
  base64ToFloat64,
  float64ToBase64,
  interleavedToPlanar,
  planarToInterleaved,
  toBufferPayload,
} from "./buffers.js";
export { LossConfig, WireConfig, toWireConfig } from "./config.js";
export {
  FrequencyLossClient,
  GradientResult,
  LossResult,
  ScaleEntry,
  ServiceStatusError,
} from "./client.js";
