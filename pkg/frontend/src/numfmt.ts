/**
 * Number-to-text formatting matching the service's canonical documents.
 *
 * `canonicalNumber` renders a double exactly the way the service writes
 * GraphML doubles: the shortest digit string that round-trips, fixed
 * notation while the decimal point sits within [-3, 16], scientific
 * notation outside that, a two-digit signed exponent, and always at least
 * one digit after the decimal point in fixed form ("5.0", never "5").
 * Writing the same model on either side of the wire must yield the same
 * bytes, so this formatter is pinned by oracle vectors in the tests.
 *
 * `formatSix` is the canvas-side companion: at most six decimals, trailing
 * zeros trimmed, negative zero normalized, mirroring the exported SVG.
 */

/** Split a JS shortest-round-trip rendering into digits and point position. */
function digitsAndPoint(abs: number): [string, number] {
  const text = abs.toString();
  const e = text.indexOf("e");
  if (e >= 0) {
    const mantissa = text.slice(0, e);
    const exponent = parseInt(text.slice(e + 1), 10);
    const digits = mantissa.replace(".", "");
    // value = 0.digits * 10^point with the mantissa shaped d or d.ddd
    return [trimTrailingZeros(digits), exponent + 1];
  }
  const dot = text.indexOf(".");
  if (dot < 0) {
    return [trimTrailingZeros(text), text.length];
  }
  const intPart = text.slice(0, dot);
  const fracPart = text.slice(dot + 1);
  if (intPart === "0") {
    let lead = 0;
    while (lead < fracPart.length && fracPart[lead] === "0") {
      lead += 1;
    }
    return [fracPart.slice(lead), -lead];
  }
  return [intPart + fracPart, intPart.length];
}

function trimTrailingZeros(digits: string): string {
  let end = digits.length;
  while (end > 1 && digits[end - 1] === "0") {
    end -= 1;
  }
  return digits.slice(0, end);
}

/** Canonical GraphML text for a finite double. */
export function canonicalNumber(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`cannot serialize non-finite number ${value}`);
  }
  if (value === 0) {
    return Object.is(value, -0) ? "-0.0" : "0.0";
  }
  const sign = value < 0 ? "-" : "";
  const [digits, point] = digitsAndPoint(Math.abs(value));
  if (point >= -3 && point <= 16) {
    if (point <= 0) {
      return `${sign}0.${"0".repeat(-point)}${digits}`;
    }
    if (point >= digits.length) {
      return `${sign}${digits}${"0".repeat(point - digits.length)}.0`;
    }
    return `${sign}${digits.slice(0, point)}.${digits.slice(point)}`;
  }
  const mantissa = digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits;
  const exponent = point - 1;
  const expDigits = String(Math.abs(exponent)).padStart(2, "0");
  return `${sign}${mantissa}e${exponent < 0 ? "-" : "+"}${expDigits}`;
}

/** Canvas coordinate text: at most six decimals, trimmed, no "-0". */
export function formatSix(value: number): string {
  let text = value.toFixed(6);
  if (text.includes(".")) {
    text = text.replace(/0+$/, "").replace(/\.$/, "");
  }
  return text === "-0" ? "0" : text;
}
