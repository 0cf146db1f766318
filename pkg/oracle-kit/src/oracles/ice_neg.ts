import { iceNeg } from '../handlers.js';
import { serve } from '../protocol.js';

serve(iceNeg);
