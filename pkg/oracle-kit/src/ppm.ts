// P3 (ASCII) PPM images: tiny, dependency-free, bit-exact.

export interface Ppm {
  width: number;
  height: number;
  pixels: number[]; // r,g,b channel values in row-major order
}

export function parsePpm(text: string): Ppm {
  const tokens = text
    .split('\n')
    .map((line) => line.split('#')[0])
    .join(' ')
    .trim()
    .split(/\s+/);
  if (tokens[0] !== 'P3') throw new Error(`unsupported PPM format: ${tokens[0]}`);
  const width = parseInt(tokens[1], 10);
  const height = parseInt(tokens[2], 10);
  const maxval = parseInt(tokens[3], 10);
  if (!(width > 0 && height > 0)) throw new Error('malformed PPM dimensions');
  if (maxval !== 255) throw new Error('only 8-bit channels (maxval 255) are supported');
  const pixels = tokens.slice(4).map(Number);
  if (pixels.length !== width * height * 3 || pixels.some((v) => !(v >= 0 && v <= 255))) {
    throw new Error('pixel data does not match the header');
  }
  return { width, height, pixels };
}

export function writePpm(img: Ppm): string {
  const lines = [`P3`, `${img.width} ${img.height}`, `255`];
  for (let i = 0; i < img.pixels.length; i += 3) {
    lines.push(`${img.pixels[i]} ${img.pixels[i + 1]} ${img.pixels[i + 2]}`);
  }
  return lines.join('\n') + '\n';
}
