/**
 * Minimal reader for NumPy .npy binary shards (format versions 1.x/2.x).
 *
 * Supports the dtypes citation-dataset dumps actually use: little-endian
 * float32/float64, int32/int64, and bool. C order only.
 */

export interface NpyArray {
  shape: number[];
  /** row-major values, numbers (int64 values are converted; must fit in 2^53) */
  data: Float64Array;
  dtype: string;
}

const MAGIC = Buffer.from("\x93NUMPY", "latin1");

export function parseNpy(buf: Buffer): NpyArray {
  if (buf.length < 10 || !buf.subarray(0, 6).equals(MAGIC)) {
    throw new Error("not a .npy file (bad magic)");
  }
  const major = buf[6];
  let headerLen: number;
  let headerStart: number;
  if (major === 1) {
    headerLen = buf.readUInt16LE(8);
    headerStart = 10;
  } else {
    headerLen = buf.readUInt32LE(8);
    headerStart = 12;
  }
  const header = buf.subarray(headerStart, headerStart + headerLen).toString("latin1");

  const descrMatch = header.match(/'descr':\s*'([^']+)'/);
  const orderMatch = header.match(/'fortran_order':\s*(True|False)/);
  const shapeMatch = header.match(/'shape':\s*\(([^)]*)\)/);
  if (!descrMatch || !orderMatch || !shapeMatch) {
    throw new Error(`unparseable .npy header: ${header.trim()}`);
  }
  if (orderMatch[1] === "True") {
    throw new Error("fortran-order .npy arrays are not supported");
  }
  const dtype = descrMatch[1];
  const shape = shapeMatch[1]
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map((s) => parseInt(s, 10));
  const count = shape.reduce((a, b) => a * b, 1);

  const body = buf.subarray(headerStart + headerLen);
  const data = new Float64Array(count);
  const read = readerFor(dtype, body);
  for (let i = 0; i < count; i++) data[i] = read(i);
  return { shape, data, dtype };
}

function readerFor(dtype: string, body: Buffer): (i: number) => number {
  switch (dtype) {
    case "<f8":
      return (i) => body.readDoubleLE(i * 8);
    case "<f4":
      return (i) => body.readFloatLE(i * 4);
    case "<i8":
      return (i) => {
        const v = body.readBigInt64LE(i * 8);
        if (v > BigInt(Number.MAX_SAFE_INTEGER) || v < BigInt(-Number.MAX_SAFE_INTEGER)) {
          throw new Error(`int64 value ${v} exceeds safe integer range`);
        }
        return Number(v);
      };
    case "<i4":
      return (i) => body.readInt32LE(i * 4);
    case "|b1":
      return (i) => (body[i] !== 0 ? 1 : 0);
    default:
      throw new Error(`unsupported .npy dtype ${dtype}`);
  }
}

/** Serialize a 2-D array as .npy (used by tests to build fixtures). */
export function writeNpy(shape: number[], values: number[], dtype = "<f8"): Buffer {
  const headerBody =
    `{'descr': '${dtype}', 'fortran_order': False, ` +
    `'shape': (${shape.join(", ")}${shape.length === 1 ? "," : ""}), }`;
  let padded = headerBody;
  while ((10 + padded.length + 1) % 64 !== 0) padded += " ";
  padded += "\n";
  const header = Buffer.from(padded, "latin1");
  const pre = Buffer.alloc(10);
  MAGIC.copy(pre, 0);
  pre[6] = 1;
  pre[7] = 0;
  pre.writeUInt16LE(header.length, 8);

  const itemSize = dtype === "<f4" || dtype === "<i4" ? 4 : dtype === "|b1" ? 1 : 8;
  const body = Buffer.alloc(values.length * itemSize);
  values.forEach((v, i) => {
    if (dtype === "<f8") body.writeDoubleLE(v, i * 8);
    else if (dtype === "<f4") body.writeFloatLE(v, i * 4);
    else if (dtype === "<i8") body.writeBigInt64LE(BigInt(v), i * 8);
    else if (dtype === "<i4") body.writeInt32LE(v, i * 4);
    else body[i] = v ? 1 : 0;
  });
  return Buffer.concat([pre, header, body]);
}
