import { icePos } from '../handlers.js';
import { serve } from '../protocol.js';

serve(icePos);
