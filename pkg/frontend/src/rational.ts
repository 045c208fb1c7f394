// Exact rational text handling. The service speaks {num, den} pairs and the
// model core is float-free, so form inputs are parsed without ever touching
// floating point: "1.5" becomes 3/2, "3/4" stays 3/4.

import type { ExprJson, Rational } from './types';

function gcd(a: number, b: number): number {
  a = Math.abs(a);
  b = Math.abs(b);
  while (b !== 0) {
    [a, b] = [b, a % b];
  }
  return a || 1;
}

export function rational(num: number, den = 1): Rational {
  if (!Number.isSafeInteger(num) || !Number.isSafeInteger(den) || den === 0) {
    throw new Error(`not an exact rational: ${num}/${den}`);
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const g = gcd(num, den);
  return { num: num / g, den: den / g };
}

export function ratAdd(a: Rational, b: Rational): Rational {
  return rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

export function ratMul(a: Rational, b: Rational): Rational {
  return rational(a.num * b.num, a.den * b.den);
}

export function ratIsZero(a: Rational): boolean {
  return a.num === 0;
}

export function parseRational(text: string): Rational {
  const t = text.trim();
  let m = /^([+-]?\d+)$/.exec(t);
  if (m) return rational(parseInt(m[1]!, 10));
  m = /^([+-]?\d+)\s*\/\s*(\d+)$/.exec(t);
  if (m) return rational(parseInt(m[1]!, 10), parseInt(m[2]!, 10));
  m = /^([+-]?)(\d*)\.(\d+)$/.exec(t);
  if (m) {
    const sign = m[1] === '-' ? -1 : 1;
    const whole = m[2] === '' ? 0 : parseInt(m[2]!, 10);
    const frac = parseInt(m[3]!, 10);
    const scale = 10 ** m[3]!.length;
    return rational(sign * (whole * scale + frac), scale);
  }
  throw new Error(`not a rational: "${text}" (use 3, -2, 3/4 or 1.5)`);
}

export function formatRational(value: Rational): string {
  return value.den === 1 ? String(value.num) : `${value.num}/${value.den}`;
}

const NAME = /^[A-Za-z_][A-Za-z0-9_]*$/;

/** Parse linear-expression text like "3 x1 - 1/2 x2 + 5" or "2*x + y". */
export function parseExpr(text: string, knownVariables?: Set<string>): ExprJson {
  const tokens = text
    .replace(/\*/g, ' ')
    .split(/\s+|(?=[+-])/)
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
  if (tokens.length === 0) {
    throw new Error('empty expression');
  }
  const terms: Record<string, Rational> = {};
  let constant = rational(0);
  let sign = 1;
  let pending: Rational | null = null;
  let operandDue = false;
  const flushPending = () => {
    if (pending !== null) {
      constant = ratAdd(constant, ratMul(pending, rational(sign)));
      pending = null;
    }
  };
  for (const token of tokens) {
    if (token === '+' || token === '-') {
      if (operandDue) {
        throw new Error(`two operators in a row near "${token}"`);
      }
      flushPending();
      sign = token === '-' ? -1 : 1;
      operandDue = true;
      continue;
    }
    if (NAME.test(token)) {
      if (knownVariables && !knownVariables.has(token)) {
        throw new Error(`unknown variable "${token}"`);
      }
      const coeff = ratMul(pending ?? rational(1), rational(sign));
      pending = null;
      sign = 1;
      operandDue = false;
      const existing = terms[token];
      const merged = existing ? ratAdd(existing, coeff) : coeff;
      if (ratIsZero(merged)) {
        delete terms[token];
      } else {
        terms[token] = merged;
      }
      continue;
    }
    if (pending !== null) {
      throw new Error(`two numbers in a row near "${token}"`);
    }
    pending = parseRational(token);
    operandDue = false;
  }
  if (operandDue) {
    throw new Error('expression ends with an operator');
  }
  flushPending();
  return { terms, constant };
}

export function formatExpr(expr: ExprJson): string {
  const parts: string[] = [];
  for (const [name, coeff] of Object.entries(expr.terms)) {
    const sign = coeff.num < 0 ? '-' : '+';
    const magnitude = rational(Math.abs(coeff.num), coeff.den);
    const coeffText =
      magnitude.num === magnitude.den ? '' : `${formatRational(magnitude)} `;
    if (parts.length === 0) {
      parts.push(`${sign === '-' ? '-' : ''}${coeffText}${name}`);
    } else {
      parts.push(`${sign} ${coeffText}${name}`);
    }
  }
  if (!ratIsZero(expr.constant) || parts.length === 0) {
    const sign = expr.constant.num < 0 ? '-' : '+';
    const magnitude = rational(Math.abs(expr.constant.num), expr.constant.den);
    if (parts.length === 0) {
      parts.push(`${sign === '-' ? '-' : ''}${formatRational(magnitude)}`);
    } else {
      parts.push(`${sign} ${formatRational(magnitude)}`);
    }
  }
  return parts.join(' ');
}
