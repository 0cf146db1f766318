// SMT-LIB value encoding/decoding for the oracle wire protocol.
// Encoding must stay bit-exact with the solver side: negative integers
// as (- n), bit-vectors as #b zero-padded to their width.

export type Sort =
  | 'Bool'
  | 'Int'
  | 'String'
  | { bitvec: number }
  | { fun: true };

export type Value =
  | { kind: 'bool'; value: boolean }
  | { kind: 'int'; value: bigint }
  | { kind: 'bitvec'; width: number; value: bigint }
  | { kind: 'string'; value: string }
  | { kind: 'fun'; text: string };

export const bool = (value: boolean): Value => ({ kind: 'bool', value });
export const int = (value: number | bigint): Value => ({ kind: 'int', value: BigInt(value) });
export const str = (value: string): Value => ({ kind: 'string', value });

export function bitvec(width: number, value: number | bigint): Value {
  const mask = (1n << BigInt(width)) - 1n;
  return { kind: 'bitvec', width, value: ((BigInt(value) % (mask + 1n)) + mask + 1n) & mask };
}

export function encodeValue(v: Value): string {
  switch (v.kind) {
    case 'bool':
      return v.value ? 'true' : 'false';
    case 'int':
      return v.value < 0n ? `(- ${-v.value})` : `${v.value}`;
    case 'bitvec':
      return '#b' + v.value.toString(2).padStart(v.width, '0');
    case 'string':
      return '"' + v.value.replace(/"/g, '""') + '"';
    case 'fun':
      return v.text;
  }
}

export function decodeValue(token: string, sort: Sort): Value {
  const tok = token.trim();
  if (sort === 'Bool') {
    if (tok === 'true') return bool(true);
    if (tok === 'false') return bool(false);
    throw new Error(`not a Bool: ${tok}`);
  }
  if (sort === 'Int') {
    const neg = tok.match(/^\(\s*-\s*(\d+)\s*\)$/);
    if (neg) return int(-BigInt(neg[1]));
    if (/^\d+$/.test(tok)) return int(BigInt(tok));
    throw new Error(`not an Int: ${tok}`);
  }
  if (sort === 'String') {
    const m = tok.match(/^"([\s\S]*)"$/);
    if (!m) throw new Error(`not a String: ${tok}`);
    return str(m[1].replace(/""/g, '"'));
  }
  if (typeof sort === 'object' && 'bitvec' in sort) {
    if (tok.startsWith('#b') && tok.length - 2 === sort.bitvec && /^[01]+$/.test(tok.slice(2))) {
      return { kind: 'bitvec', width: sort.bitvec, value: BigInt('0b' + tok.slice(2)) };
    }
    throw new Error(`not a BitVec ${sort.bitvec}: ${tok}`);
  }
  if (tok.startsWith('(define-fun')) {
    return { kind: 'fun', text: tok };
  }
  throw new Error(`not a candidate function: ${tok.slice(0, 40)}`);
}

export function asInt(v: Value): bigint {
  if (v.kind === 'int' || v.kind === 'bitvec') return v.value;
  throw new Error(`expected a numeric value, got ${v.kind}`);
}

export function asBool(v: Value): boolean {
  if (v.kind === 'bool') return v.value;
  throw new Error(`expected a Bool, got ${v.kind}`);
}
