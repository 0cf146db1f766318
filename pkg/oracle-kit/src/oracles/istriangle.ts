import { istriangle } from '../handlers.js';
import { serve } from '../protocol.js';

serve(istriangle);
