/**
 * Float64 buffer plumbing for the service wire format.
 *
 * The service moves pixel and gradient data as base64-encoded little-endian
 * float64 bytes in channel-major planar layout: C planes of H*W row-major
 * values. Callers usually hold interleaved (H, W, C) data; the conversion is
 * owned here so the wire format stays single-layout.
 */

export type Layout = "planar" | "interleaved";

/** Wire form of one caller-owned buffer. */
export interface BufferPayload {
  height: number;
  width: number;
  channels: number;
  layout: "planar";
  data_b64: string;
}

/** Caller-side tensor: contiguous float64 data plus its shape and layout. */
export interface ImageTensor {
  data: Float64Array;
  height: number;
  width: number;
  channels: number;
  /** defaults to "planar" */
  layout?: Layout;
}

export class BufferFormatError extends Error {}

export function float64ToBase64(values: Float64Array): string {
  const bytes = new Uint8Array(values.length * 8);
  const view = new DataView(bytes.buffer);
  for (let i = 0; i < values.length; i++) {
    view.setFloat64(i * 8, values[i], true);
  }
  return Buffer.from(bytes).toString("base64");
}

export function base64ToFloat64(b64: string): Float64Array {
  const bytes = Buffer.from(b64, "base64");
  if (bytes.length % 8 !== 0) {
    throw new BufferFormatError(
      `decoded buffer has ${bytes.length} bytes, not a multiple of 8`,
    );
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.length);
  const out = new Float64Array(bytes.length / 8);
  for (let i = 0; i < out.length; i++) {
    out[i] = view.getFloat64(i * 8, true);
  }
  return out;
}

/** (H, W, C) interleaved -> C planes of H*W. */
export function interleavedToPlanar(
  data: Float64Array,
  height: number,
  width: number,
  channels: number,
): Float64Array {
  const out = new Float64Array(data.length);
  const planeSize = height * width;
  for (let p = 0; p < planeSize; p++) {
    for (let c = 0; c < channels; c++) {
      out[c * planeSize + p] = data[p * channels + c];
    }
  }
  return out;
}

/** C planes of H*W -> (H, W, C) interleaved. */
export function planarToInterleaved(
  data: Float64Array,
  height: number,
  width: number,
  channels: number,
): Float64Array {
  const out = new Float64Array(data.length);
  const planeSize = height * width;
  for (let p = 0; p < planeSize; p++) {
    for (let c = 0; c < channels; c++) {
      out[p * channels + c] = data[c * planeSize + p];
    }
  }
  return out;
}

/** Validate a caller tensor and encode it for the wire. */
export function toBufferPayload(tensor: ImageTensor): BufferPayload {
  const { height, width, channels } = tensor;
  if (!(tensor.data instanceof Float64Array)) {
    throw new BufferFormatError(
      `tensor data must be a Float64Array, got ${Object.prototype.toString.call(tensor.data)}`,
    );
  }
  if (!Number.isInteger(height) || !Number.isInteger(width) || height < 1 || width < 1) {
    throw new BufferFormatError(`bad dimensions ${height}x${width}`);
  }
  if (channels !== 1 && channels !== 3) {
    throw new BufferFormatError(`channels must be 1 or 3, got ${channels}`);
  }
  if (tensor.data.length !== height * width * channels) {
    throw new BufferFormatError(
      `data length ${tensor.data.length} != ${height}*${width}*${channels}`,
    );
  }
  const layout = tensor.layout ?? "planar";
  const planar =
    layout === "planar"
      ? tensor.data
      : interleavedToPlanar(tensor.data, height, width, channels);
  return {
    height,
    width,
    channels,
    layout: "planar",
    data_b64: float64ToBase64(planar),
  };
}
