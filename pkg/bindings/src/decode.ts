/**
 * Decoding for the env-server's wire representation of numeric data.
 *
 * Matrices arrive as base64 of little-endian row-major bytes (float64 for
 * features, int32 for index arrays). Decoding builds a typed-array view
 * straight over the decoded buffer; the bytes are only copied when the
 * allocation is misaligned for the element type, which Node's pooled
 * base64 path never produces in practice.
 */

export interface EncodedMatrix {
  shape: number[];
  dtype: "float64" | "int32";
  order: "row_major";
  b64: string;
  columns?: string[];
}

export interface Matrix<A extends Float64Array | Int32Array = Float64Array> {
  /** [rows, cols] for 2-d payloads, [length] for 1-d. */
  shape: number[];
  /** Row-major elements, viewing the decoded bytes. */
  data: A;
  /** Column names, when the server sent any. */
  columns?: string[];
}

function view<A extends Float64Array | Int32Array>(
  buf: Buffer,
  ctor: { new (b: ArrayBufferLike, off: number, len: number): A; BYTES_PER_ELEMENT: number },
): A {
  const n = buf.byteLength / ctor.BYTES_PER_ELEMENT;
  if (!Number.isInteger(n)) {
    throw new RangeError(`byte length ${buf.byteLength} is not a whole number of elements`);
  }
  if (buf.byteOffset % ctor.BYTES_PER_ELEMENT !== 0) {
    const copy = new Uint8Array(buf.byteLength);
    copy.set(buf);
    return new ctor(copy.buffer, 0, n);
  }
  return new ctor(buf.buffer, buf.byteOffset, n);
}

export function decodeFloat64Matrix(enc: EncodedMatrix): Matrix<Float64Array> {
  if (enc.dtype !== "float64") throw new TypeError(`expected float64 payload, got ${enc.dtype}`);
  const out: Matrix<Float64Array> = {
    shape: enc.shape,
    data: view(Buffer.from(enc.b64, "base64"), Float64Array),
  };
  if (enc.columns) out.columns = enc.columns;
  return out;
}

export function decodeInt32Matrix(enc: EncodedMatrix): Matrix<Int32Array> {
  if (enc.dtype !== "int32") throw new TypeError(`expected int32 payload, got ${enc.dtype}`);
  return { shape: enc.shape, data: view(Buffer.from(enc.b64, "base64"), Int32Array) };
}

/** Element (i, j) of a row-major 2-d matrix. */
export function at<A extends Float64Array | Int32Array>(m: Matrix<A>, i: number, j: number): number {
  return m.data[i * m.shape[1] + j];
}

/** Row i of a row-major 2-d matrix, as a zero-copy subview. */
export function row<A extends Float64Array | Int32Array>(m: Matrix<A>, i: number): A {
  const w = m.shape[1];
  return m.data.subarray(i * w, (i + 1) * w) as A;
}

/**
 * Non-finite floats travel as the strings "inf", "-inf", "nan" so the
 * stream stays strict JSON; everything else is a plain number.
 */
export function decodeFloat(value: number | string | null): number | null {
  if (value === null || typeof value === "number") return value;
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  if (value === "nan") return NaN;
  throw new TypeError(`not a wire float: ${JSON.stringify(value)}`);
}
