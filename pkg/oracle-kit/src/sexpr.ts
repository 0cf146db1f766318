// Minimal s-expression reader for define-fun candidates and PPM-free text.

export type Sexpr = string | Sexpr[];

export function tokenize(text: string): string[] {
  const out: string[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (ch === '(' || ch === ')') {
      out.push(ch);
      i += 1;
    } else if (/\s/.test(ch)) {
      i += 1;
    } else if (ch === ';') {
      while (i < text.length && text[i] !== '\n') i += 1;
    } else if (ch === '"') {
      let j = i + 1;
      let buf = '"';
      while (j < text.length) {
        if (text[j] === '"' && text[j + 1] === '"') {
          buf += '""';
          j += 2;
        } else if (text[j] === '"') {
          buf += '"';
          j += 1;
          break;
        } else {
          buf += text[j];
          j += 1;
        }
      }
      out.push(buf);
      i = j;
    } else {
      let j = i;
      while (j < text.length && !/[\s()]/.test(text[j]) && text[j] !== ';') j += 1;
      out.push(text.slice(i, j));
      i = j;
    }
  }
  return out;
}

export function readOne(text: string): Sexpr {
  const tokens = tokenize(text);
  const [node, rest] = readFrom(tokens, 0);
  if (rest !== tokens.length) throw new Error('trailing tokens after s-expression');
  return node;
}

function readFrom(tokens: string[], i: number): [Sexpr, number] {
  if (i >= tokens.length) throw new Error('unexpected end of input');
  if (tokens[i] === '(') {
    const items: Sexpr[] = [];
    i += 1;
    while (tokens[i] !== ')') {
      if (i >= tokens.length) throw new Error("unbalanced '('");
      const [node, next] = readFrom(tokens, i);
      items.push(node);
      i = next;
    }
    return [items, i + 1];
  }
  if (tokens[i] === ')') throw new Error("unbalanced ')'");
  return [tokens[i], i + 1];
}
