/** WMT1 tensor parsing: magic "WMT1", u8 rank, rank little-endian u32 dims,
 * float32 little-endian payload, row-major. */

export interface Tensor {
  dims: number[];
  data: Float32Array;
}

const MAGIC = [0x57, 0x4d, 0x54, 0x31]; // "WMT1"

export function decodeTensor(buffer: ArrayBuffer): Tensor {
  const view = new DataView(buffer);
  if (buffer.byteLength < 5 || MAGIC.some((b, i) => view.getUint8(i) !== b)) {
    throw new Error("not a WMT1 tensor");
  }
  const rank = view.getUint8(4);
  if (rank < 1 || rank > 8) throw new Error(`bad rank ${rank}`);
  const dims: number[] = [];
  for (let i = 0; i < rank; i++) dims.push(view.getUint32(5 + 4 * i, true));
  const count = dims.reduce((a, b) => a * b, 1);
  const offset = 5 + 4 * rank;
  if (buffer.byteLength !== offset + 4 * count) {
    throw new Error(`payload size mismatch: ${buffer.byteLength} bytes for dims ${dims}`);
  }
  // copy to guarantee alignment for the Float32Array view
  const payload = buffer.slice(offset);
  const data = new Float32Array(payload);
  if (isBigEndian()) byteSwapFloat32(payload);
  return { dims, data };
}

export function encodeTensor(tensor: Tensor): ArrayBuffer {
  const count = tensor.dims.reduce((a, b) => a * b, 1);
  if (count !== tensor.data.length) throw new Error("dims do not match data length");
  const rank = tensor.dims.length;
  const buffer = new ArrayBuffer(5 + 4 * rank + 4 * count);
  const view = new DataView(buffer);
  MAGIC.forEach((b, i) => view.setUint8(i, b));
  view.setUint8(4, rank);
  tensor.dims.forEach((d, i) => view.setUint32(5 + 4 * i, d, true));
  const offset = 5 + 4 * rank;
  for (let i = 0; i < count; i++) view.setFloat32(offset + 4 * i, tensor.data[i], true);
  return buffer;
}

/** Value at [frame, row, col, channel] of a rank-4 video tensor. */
export function videoAt(t: Tensor, f: number, r: number, c: number, ch: number): number {
  const [, H, W, C] = t.dims;
  return t.data[((f * H + r) * W + c) * C + ch];
}

function isBigEndian(): boolean {
  return new Uint8Array(new Uint32Array([1]).buffer)[0] === 0;
}

function byteSwapFloat32(buffer: ArrayBuffer): void {
  const bytes = new Uint8Array(buffer);
  for (let i = 0; i < bytes.length; i += 4) {
    [bytes[i], bytes[i + 3]] = [bytes[i + 3], bytes[i]];
    [bytes[i + 1], bytes[i + 2]] = [bytes[i + 2], bytes[i + 1]];
  }
}
