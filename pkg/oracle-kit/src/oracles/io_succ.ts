import { ioSucc } from '../handlers.js';
import { serve } from '../protocol.js';

serve(ioSucc);
