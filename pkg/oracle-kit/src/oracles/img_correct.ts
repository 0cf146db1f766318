// usage: img_correct <original.ppm> <target.ppm> <candidate define-fun>
import { imgCorrect } from '../handlers.js';
import { serve } from '../protocol.js';

const [orig, target, ...rest] = process.argv.slice(2);
if (!orig || !target) {
  process.stderr.write('usage: img_correct <original.ppm> <target.ppm> <candidate>\n');
  process.exit(2);
}
serve(imgCorrect(orig, target), rest);
